#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "cfpo/perm_group.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cfpo;

namespace {

PermGroup cyclic4() {
    // 4-cycle on four points
    Perm g{{1, 2, 3, 0}};
    return PermGroup::generated({"p0", "p1", "p2", "p3"}, {g});
}

PermGroup klein4() {
    Perm a{{1, 0, 2, 3}};
    Perm b{{0, 1, 3, 2}};
    return PermGroup::generated({"p0", "p1", "p2", "p3"}, {a, b});
}

} // namespace

TEST_CASE("automorphism groups of the basic fixtures") {
    auto fan = automorphism_group(fixtures::fan5());
    CHECK(fan.order() == 4);
    CHECK(fan.order() == oracles::all_automorphisms(fixtures::fan5()).size());

    CHECK(automorphism_group(fixtures::chain(5)).order() == 1);
    CHECK(automorphism_group(fixtures::antichain(3)).order() == 6);

    // the chain predicate pins t1, leaving only the leaf swap
    auto t3 = fixtures::tee3();
    std::map<std::string, std::set<std::string>> preds{
        {"chain", {t3.chain.begin(), t3.chain.end()}}};
    CHECK(automorphism_group(t3.base, {}, preds).order() == 2);
    // without it, t1 can trade places with the leaves
    CHECK(automorphism_group(t3.base).order() == 6);
}

TEST_CASE("colors restrict the group") {
    std::map<std::string, std::string> colors{{"x0", "red"}, {"x1", "blue"}, {"x2", "blue"}};
    CHECK(automorphism_group(fixtures::antichain(3), colors).order() == 2);
}

TEST_CASE("size bound is enforced") {
    SearchLimits tight;
    tight.max_degree = 3;
    CHECK_THROWS_AS(automorphism_group(fixtures::fan5(), {}, {}, tight), BudgetError);
}

TEST_CASE("orbit reports") {
    auto fan = fixtures::fan5();
    auto g = automorphism_group(fan);
    auto rep = orbit_report(g, fan, fan.elements());
    CHECK(rep.orbits == std::vector<std::vector<std::string>>{{"a0", "a1"}, {"b0", "b1"}, {"c"}});
    CHECK_FALSE(rep.transitive_on_set);

    auto trivial = PermGroup::trivial(fan.elements());
    CHECK(orbit_report(trivial, fan, fan.elements()).orbits.size() == 5);

    auto anti = fixtures::antichain(3);
    auto sym = automorphism_group(anti);
    auto rep3 = orbit_report(sym, anti, anti.elements());
    CHECK(rep3.orbits.size() == 1);
    CHECK(rep3.transitive_on_set);
    CHECK(rep3.transitive_on_adjacent_pairs); // vacuous: no pairs
}

TEST_CASE("stabilizers") {
    DecoratedPoset e3 = fixtures::e3();
    auto g = automorphism_group(e3.base);
    REQUIRE(g.order() == 64);
    auto fixed = stabilizer(g, e3.skeleton_elements(), StabilizerMode::Pointwise);
    CHECK(fixed.order() == 16); // one chain-tree swap per adjacent pair

    CHECK(stabilizer(g, {}, StabilizerMode::Pointwise).order() == g.order());
    auto only_id = stabilizer(g, std::vector<std::string>(g.domain().begin(), g.domain().end()),
                              StabilizerMode::Pointwise);
    CHECK(only_id.order() == 1);

    // setwise vs pointwise on the fan
    auto fan = fixtures::fan5();
    auto fg = automorphism_group(fan);
    CHECK(stabilizer(fg, {"a0", "a1"}, StabilizerMode::Setwise).order() == 4);
    CHECK(stabilizer(fg, {"a0", "a1"}, StabilizerMode::Pointwise).order() == 2);
}

TEST_CASE("subgroup enumeration") {
    auto k4 = klein4();
    REQUIRE(k4.order() == 4);
    auto subs = all_subgroups(k4);
    CHECK(subs.size() == 5);
    CHECK(subs.size() == static_cast<std::size_t>(oracles::subgroup_count_by_subsets(k4)));

    auto c4 = cyclic4();
    REQUIRE(c4.order() == 4);
    auto subs4 = all_subgroups(c4);
    CHECK(subs4.size() == 3);
    CHECK(subs4.size() == static_cast<std::size_t>(oracles::subgroup_count_by_subsets(c4)));

    CHECK(all_subgroups(PermGroup::trivial({"x"})).size() == 1);

    // trivial and full group always appear; Lagrange holds
    for (const auto& s : subs) {
        CHECK(k4.order() % s.order() == 0);
        for (const auto& e : s.elements()) CHECK(k4.contains(e));
    }
    CHECK(subs.front().order() == 1);
    CHECK(subs.back().order() == 4);

    SearchLimits tight;
    tight.max_subgroup_order = 2;
    CHECK_THROWS_AS(all_subgroups(k4, tight), BudgetError);
}

TEST_CASE("abstract isomorphism") {
    CHECK_FALSE(find_group_isomorphism(klein4(), cyclic4()).has_value());
    CHECK(find_group_isomorphism(cyclic4(), cyclic4()).has_value());

    auto fan_aut = automorphism_group(fixtures::fan5());
    auto wit = find_group_isomorphism(fan_aut, klein4());
    REQUIRE(wit.has_value());
    // witness is a genuine homomorphism
    const auto& w = *wit;
    for (std::size_t a = 0; a < fan_aut.order(); ++a)
        for (std::size_t b = 0; b < fan_aut.order(); ++b) {
            int ab = fan_aut.element_index(
                compose(fan_aut.elements()[a], fan_aut.elements()[b]));
            int im = klein4().element_index(
                compose(klein4().elements()[w[a]], klein4().elements()[w[b]]));
            CHECK(w[ab] == im);
        }
}

TEST_CASE("group closure and orbit-stabilizer spot checks") {
    auto g = automorphism_group(fixtures::fan5());
    for (const auto& a : g.elements())
        for (const auto& b : g.elements()) CHECK(g.contains(compose(a, b)));

    // |orbit(x)| * |stab(x)| = |G|
    for (const auto& x : g.domain()) {
        std::set<std::string> orbit;
        for (const auto& e : g.elements()) orbit.insert(g.image_name(e, x));
        auto st = stabilizer(g, {x}, StabilizerMode::Pointwise);
        CHECK(orbit.size() * st.order() == g.order());
    }
}

TEST_CASE("property: pruned search equals the all-bijections oracle") {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 60; ++round) {
        Poset p = generators::random_poset(1 + static_cast<int>(rng() % 6), rng);
        auto fast = automorphism_group(p);
        auto slow = oracles::all_automorphisms(p);
        std::sort(slow.begin(), slow.end());
        CHECK(fast.elements() == slow);
    }
}

TEST_CASE("generators regenerate the group") {
    auto g = automorphism_group(fixtures::e2().base);
    auto re = PermGroup::generated(g.domain(), g.generators());
    CHECK(re.elements() == g.elements());
}
