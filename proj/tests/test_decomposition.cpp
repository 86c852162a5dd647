#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cfpo/decomposition.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace cfpo;

namespace {

// round trip: decompose a decoration along its skeleton and rebuild
void check_round_trip(const Poset& x, const ChainedTree& s, const ChainedTree& t) {
    DecoratedPoset d = decorate(x, s, t);
    Decomposition dec = decompose(d.base, d.skeleton_elements());

    CHECK(find_order_isomorphism(dec.skeleton, x).has_value());
    CHECK(dec.above.empty() == s.empty());
    // a between tree is only recoverable when something was glued
    bool glued = !t.empty() && !x.cover_pairs().empty();
    CHECK(dec.between.empty() == !glued);
    if (!s.empty()) CHECK(find_order_isomorphism(dec.above.base, s.base).has_value());
    if (glued) CHECK(find_order_isomorphism(dec.between.base, t.base).has_value());

    // witness really is an isomorphism decorate(...) -> M
    DecoratedPoset redone = decorate(dec.skeleton, dec.above, dec.between);
    REQUIRE(dec.witness.size() == d.base.size());
    for (const auto& [from, to] : dec.witness)
        for (const auto& [from2, to2] : dec.witness)
            CHECK(redone.base.less(from, from2) == d.base.less(to, to2));

    // and the automorphism groups agree
    auto g_m = automorphism_group(d.base);
    auto g_r = automorphism_group(redone.base);
    CHECK(find_group_isomorphism(g_m, g_r).has_value());

    // the witness conjugates one group onto the other (equivariance)
    for (const auto& e : g_r.elements()) {
        Perm conj = Perm::identity(static_cast<int>(d.base.size()));
        for (const auto& [from, to] : dec.witness) {
            std::string moved = g_r.image_name(e, from);
            conj.img[d.base.index_of(to)] = d.base.index_of(dec.witness.at(moved));
        }
        CHECK(g_m.contains(conj));
    }
}

} // namespace

TEST_CASE("classification of the 14-element example") {
    DecoratedPoset d = fixtures::dec_abb();
    auto verdicts = classify_components(d.base, d.skeleton_elements());
    int attached = 0, between = 0;
    for (const auto& v : verdicts) {
        REQUIRE(v.kind != ComponentVerdict::Kind::Violation);
        if (v.kind == ComponentVerdict::Kind::Attached) ++attached;
        if (v.kind == ComponentVerdict::Kind::Between) {
            ++between;
            CHECK(d.base.less(v.anchor, v.anchor2));
        }
    }
    CHECK(attached == 5);
    CHECK(between == 4);
}

TEST_CASE("degenerate classifications") {
    Poset a = fixtures::fan5();
    CHECK(classify_components(a, a.elements()).empty());
    CHECK_THROWS_AS(classify_components(fixtures::diamond(), {"a"}), InputError);
    CHECK_THROWS_AS(classify_components(a, {}), InputError);
}

TEST_CASE("between verdict carries the gates") {
    DecoratedPoset d = fixtures::e2();
    auto verdicts = classify_components(d.base, d.skeleton_elements());
    bool saw_between = false;
    for (const auto& v : verdicts)
        if (v.kind == ComponentVerdict::Kind::Between) {
            saw_between = true;
            CHECK(v.anchor == "x0");
            CHECK(v.anchor2 == "x1");
            CHECK(v.members == std::vector<std::string>{"x0..x1/t"});
        }
    CHECK(saw_between);
}

TEST_CASE("round trips over the curated instances") {
    check_round_trip(fixtures::chain(2), fixtures::vee(), fixtures::point_tree("t"));
    check_round_trip(fixtures::fan5(), fixtures::point_tree("b"), fixtures::point_tree("b"));
    check_round_trip(fixtures::fan5(), fixtures::point_tree("b"), fixtures::tee3());
    check_round_trip(fixtures::fan5(), fixtures::vee(), fixtures::point_tree("t"));
}

TEST_CASE("decomposing along the whole set returns the poset bare") {
    Poset x = fixtures::fan5();
    Decomposition dec = decompose(x, x.elements());
    CHECK(dec.skeleton == x);
    CHECK(dec.above.empty());
    CHECK(dec.between.empty());
    CHECK(dec.transitive_on_set.has_value());
}

TEST_CASE("non-homogeneous bundles are rejected") {
    // decorate, then hang one extra leaf over a0 only
    DecoratedPoset d = fixtures::dec_abb();
    std::vector<std::string> elems = d.base.elements();
    elems.push_back("extra");
    auto covers = d.base.cover_pairs_named();
    covers.emplace_back("a0/b", "extra");
    Poset m = Poset::build(elems, covers, RelationKind::Covers);
    CHECK_THROWS_WITH_AS(decompose(m, d.skeleton_elements()),
                         doctest::Contains("not homogeneous"), InputError);
}

TEST_CASE("classes hanging below their anchor are rejected") {
    // wedge: left < top > right, candidate {top}
    Poset wedge =
        Poset::build({"left", "right", "top"}, {{"left", "top"}, {"right", "top"}},
                     RelationKind::Covers);
    CHECK_THROWS_WITH_AS(decompose(wedge, {"top"}), doctest::Contains("not strictly above"),
                         InputError);
}

TEST_CASE("two attached classes at one anchor are not a decoration") {
    // a < u, a < v with u,v incomparable: two classes attached at a
    Poset m = Poset::build({"a", "u", "v"}, {{"a", "u"}, {"a", "v"}}, RelationKind::Covers);
    CHECK_THROWS_WITH_AS(decompose(m, {"a"}), doctest::Contains("not isomorphic"), InputError);
}

TEST_CASE("property: random decorations round trip") {
    std::mt19937_64 rng(808);
    int checked = 0;
    for (int round = 0; round < 40; ++round) {
        Poset x = generators::random_cfpo(1 + static_cast<int>(rng() % 4), rng, "x");
        ChainedTree s = generators::random_chained_tree(static_cast<int>(rng() % 4), rng, "s");
        ChainedTree t = generators::random_chained_tree(static_cast<int>(rng() % 4), rng, "u");
        DecoratedPoset d = decorate(x, s, t);
        if (d.base.size() > 24) continue; // keep the Aut checks quick
        check_round_trip(x, s, t);
        ++checked;
    }
    CHECK(checked > 10);
}
