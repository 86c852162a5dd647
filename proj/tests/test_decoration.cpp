#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cfpo/decoration.hpp"
#include "cfpo/perm_group.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace cfpo;

namespace {

int count_kind(const DecoratedPoset& d, Provenance::Kind k) {
    int c = 0;
    for (auto& [e, pv] : d.provenance)
        if (pv.kind == k) ++c;
    return c;
}

} // namespace

TEST_CASE("the 14-element example") {
    DecoratedPoset d = fixtures::dec_abb();
    CHECK(d.base.size() == 14);
    CHECK(count_kind(d, Provenance::Kind::Skeleton) == 5);
    CHECK(count_kind(d, Provenance::Kind::Above) == 5);
    CHECK(count_kind(d, Provenance::Kind::Between) == 4);
    CHECK(d.base.is_cycle_free());

    // between points sit strictly between their anchors
    CHECK(d.base.less("a0", "a0..c/b"));
    CHECK(d.base.less("a0..c/b", "c"));
    // the direct skeleton cover is gone: a0 < b < c now
    auto ap = adjacent_pairs(d.base);
    CHECK(std::find(ap.begin(), ap.end(), std::make_pair(std::string("a0"), std::string("c"))) ==
          ap.end());
}

TEST_CASE("degenerate shapes") {
    Poset empty = Poset::build({}, {}, RelationKind::Covers);
    DecoratedPoset none = decorate(empty, fixtures::vee(), fixtures::tee3());
    CHECK(none.base.empty());

    DecoratedPoset bare = decorate(fixtures::fan5(), ChainedTree{}, ChainedTree{});
    CHECK(bare.base == fixtures::fan5());

    // one-point skeleton: the glued order is S with a new bottom; its
    // automorphism group is still Aut(S)
    DecoratedPoset zs = decorate(fixtures::point("z"), fixtures::vee(), ChainedTree{});
    CHECK(zs.base.size() == 4);
    CHECK(automorphism_group(zs.base).order() ==
          automorphism_group(fixtures::vee().base).order());
}

TEST_CASE("nine-point instance") {
    DecoratedPoset d = fixtures::e2();
    CHECK(d.base.size() == 9);
    CHECK(d.base.less("x0", "x0..x1/t"));
    CHECK(d.base.less("x0..x1/t", "x1"));
    CHECK(d.provenance.at("x0..x1/t").on_chain);
    // off-chain leaves of the above copy are not between the anchors
    CHECK_FALSE(d.base.less("x0/s1", "x1"));
}

TEST_CASE("off-chain between elements are not below the upper anchor") {
    DecoratedPoset d = fixtures::e3();
    CHECK(d.base.size() == 26);
    CHECK(d.base.less("a0", "a0..c/w1"));
    CHECK_FALSE(d.base.less("a0..c/w1", "c"));
    CHECK(d.base.less("a0..c/t1", "c"));

    // chain copies are exactly the elements comparable to both anchors
    for (const auto& e : d.between_copy("a0", "c")) {
        bool comparable_both = d.base.less("a0", e) && d.base.less(e, "c");
        CHECK(comparable_both == d.provenance.at(e).on_chain);
    }
}

TEST_CASE("skeleton recovery and size formula") {
    auto x = fixtures::fan5();
    DecoratedPoset d = decorate(x, fixtures::vee(), fixtures::tee3());
    CHECK(skeleton_of(d) == x);
    CHECK(d.base.size() == 5 + 5 * 3 + 4 * 4);
    CHECK(skeleton_of(fixtures::e3()) == x);
}

TEST_CASE("name collisions are rejected") {
    // a skeleton already containing the generated name
    Poset bad = Poset::build({"x", "x/s0"}, {{"x", "x/s0"}}, RelationKind::Covers);
    ChainedTree s = ChainedTree::make(fixtures::point("s0"));
    CHECK_THROWS_AS(decorate(bad, s, ChainedTree{}), InputError);
}

TEST_CASE("between tree requires a chain") {
    // vee has two maximal chains, so none is auto-derived
    CHECK(fixtures::vee().chain.empty());
    CHECK_THROWS_AS(decorate(fixtures::chain(2), ChainedTree{}, fixtures::vee()), InputError);
}

TEST_CASE("property: decorations of random inputs stay cycle-free with the right size") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 120; ++round) {
        Poset x = generators::random_cfpo(1 + static_cast<int>(rng() % 6), rng, "x");
        ChainedTree s = generators::random_chained_tree(static_cast<int>(rng() % 5), rng, "s");
        ChainedTree t = generators::random_chained_tree(static_cast<int>(rng() % 5), rng, "u");
        DecoratedPoset d = decorate(x, s, t);
        CHECK(d.base.is_cycle_free());
        std::size_t ap = x.cover_pairs().size();
        CHECK(d.base.size() == x.size() + x.size() * s.base.size() + ap * t.base.size());
        // the skeleton order embeds unchanged
        CHECK(skeleton_of(d) == x);
    }
}

TEST_CASE("join richness") {
    auto rep = is_join_rich(fixtures::fan5());
    CHECK_FALSE(rep.join_rich);
    // c = a0 v a1 is the only join point
    CHECK(rep.non_join_points == std::vector<std::string>{"a0", "a1", "b0", "b1"});

    CHECK_FALSE(is_join_rich(fixtures::point()).join_rich);

    // three minimal points, three pairwise joins, one top: the minimal
    // points can never be joins, so even this poset is not join-rich
    Poset seven = Poset::build({"m0", "m1", "m2", "j01", "j02", "j12", "top"},
                               {{"m0", "j01"},
                                {"m1", "j01"},
                                {"m0", "j02"},
                                {"m2", "j02"},
                                {"m1", "j12"},
                                {"m2", "j12"},
                                {"j01", "top"},
                                {"j02", "top"},
                                {"j12", "top"}},
                               RelationKind::Covers);
    auto rep7 = is_join_rich(seven);
    CHECK_FALSE(rep7.join_rich);
    CHECK(rep7.non_join_points == std::vector<std::string>{"m0", "m1", "m2"});
}
