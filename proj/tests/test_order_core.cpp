#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "cfpo/poset.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cfpo;

TEST_CASE("build from covers computes the closure") {
    Poset a = fixtures::fan5();
    // oracle: reachability closure of the four cover pairs
    auto lt = oracles::closure({"a0", "a1", "c", "b0", "b1"},
                               {{"a0", "c"}, {"a1", "c"}, {"c", "b0"}, {"c", "b1"}});
    CHECK(lt.size() == 8);
    CHECK(a.lt_count() == 8);
    for (auto& [x, y] : lt) CHECK(a.less(x, y));
    CHECK_FALSE(a.less("a0", "a1"));
    CHECK_FALSE(a.less("c", "a0"));
}

TEST_CASE("single element and error cases") {
    Poset one = Poset::build({"z"}, {}, RelationKind::Covers);
    CHECK(one.lt_count() == 0);

    CHECK_THROWS_WITH_AS(Poset::build({"x", "y"}, {{"x", "y"}, {"y", "x"}}, RelationKind::Covers),
                         doctest::Contains("cycle"), InputError);
    CHECK_THROWS_AS(Poset::build({"x"}, {{"x", "x"}}, RelationKind::Covers), InputError);
    CHECK_THROWS_AS(Poset::build({"x"}, {{"x", "q"}}, RelationKind::Covers), InputError);
    CHECK_THROWS_AS(Poset::build({"x", "x"}, {}, RelationKind::Covers), InputError);
}

TEST_CASE("adjacent pairs match the triple-scan oracle") {
    Poset a = fixtures::fan5();
    auto expect = oracles::adjacent_pairs(a);
    auto got = adjacent_pairs(a);
    CHECK(std::set<std::pair<std::string, std::string>>(got.begin(), got.end()) == expect);
    CHECK(got.size() == 4);

    auto two = fixtures::chain(2);
    CHECK(adjacent_pairs(two) ==
          std::vector<std::pair<std::string, std::string>>{{"x0", "x1"}});
    CHECK(adjacent_pairs(fixtures::antichain(3)).empty());
}

TEST_CASE("cycle-freeness detection") {
    CHECK(fixtures::fan5().is_cycle_free());

    Poset d = fixtures::diamond();
    CHECK_FALSE(d.is_cycle_free());
    CHECK(d.cycle_witness().size() >= 4);

    Poset crown = Poset::build({"a", "b", "c", "d"},
                               {{"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}},
                               RelationKind::Covers);
    CHECK_FALSE(crown.is_cycle_free());
}

TEST_CASE("paths in the cover graph") {
    Poset a = fixtures::fan5();
    CHECK(*a.path("a0", "a1") == std::vector<std::string>{"a0", "c", "a1"});
    CHECK(*a.path("a0", "a0") == std::vector<std::string>{"a0"});
    CHECK(*a.path("a0", "b1") == std::vector<std::string>{"a0", "c", "b1"});

    Poset two_comp = Poset::build({"p", "q", "r"}, {{"p", "q"}}, RelationKind::Covers);
    CHECK_FALSE(two_comp.path("p", "r").has_value());

    CHECK_THROWS_AS(fixtures::diamond().path("a", "d"), InputError);
}

TEST_CASE("components avoiding a banned set") {
    Poset a = fixtures::fan5();
    auto cls = a.components_avoiding({"c"});
    REQUIRE(cls.size() == 4);
    for (const auto& c : cls) CHECK(c.size() == 1);

    CHECK(a.components_avoiding({}).size() == 1);
    CHECK(a.components_avoiding(a.elements()).empty());
}

TEST_CASE("boundary gates") {
    Poset a = fixtures::fan5();
    CHECK(a.boundary({"a0"}) == std::vector<std::string>{"c"});
    CHECK(a.boundary({"a0", "a1", "b0", "b1", "c"}).empty()); // whole component
    CHECK(a.boundary({"a0", "c"}) == std::vector<std::string>{}); // exits via a1, b0, b1
}

TEST_CASE("tree validation") {
    CHECK_FALSE(validate_tree(fixtures::tee3()).has_value());
    CHECK_FALSE(validate_tree(fixtures::point_tree()).has_value());
    CHECK_FALSE(validate_tree(fixtures::vee()).has_value());

    // diamond: the top's down-set is not a chain
    ChainedTree bad;
    bad.base = fixtures::diamond();
    bad.root = "a";
    auto v = validate_tree(bad);
    REQUIRE(v.has_value());
    CHECK(v->message.find("not a chain") != std::string::npos);

    // non-maximal chain
    ChainedTree t = fixtures::tee3();
    t.chain = {"t0"};
    auto v2 = validate_tree(t);
    REQUIRE(v2.has_value());
    CHECK(v2->message.find("maximal") != std::string::npos);

    // chain missing the root
    ChainedTree t3 = fixtures::tee3();
    t3.chain = {"t1"};
    CHECK(validate_tree(t3).has_value());
}

TEST_CASE("property: cover regeneration and path symmetry on random instances") {
    std::mt19937_64 rng(12345);
    for (int round = 0; round < 200; ++round) {
        Poset p = generators::random_cfpo(2 + static_cast<int>(rng() % 8), rng, "n",
                                          round % 2 == 0);
        // rebuilding from the derived covers gives the same order
        Poset q = Poset::build(p.elements(), p.cover_pairs_named(), RelationKind::Covers);
        CHECK(p == q);

        // path symmetry and prefix containment
        const int n = static_cast<int>(p.size());
        int x = static_cast<int>(rng() % n), y = static_cast<int>(rng() % n);
        auto fwd = p.path(x, y);
        auto bwd = p.path(y, x);
        CHECK(fwd.has_value() == bwd.has_value());
        if (fwd) {
            auto rev = *bwd;
            std::reverse(rev.begin(), rev.end());
            CHECK(*fwd == rev);
            for (int z : *fwd) {
                auto part = p.path(x, z);
                REQUIRE(part.has_value());
                // path(x,z) is an initial segment of path(x,y)
                CHECK(std::equal(part->begin(), part->end(), fwd->begin()));
            }
        }
    }
}

TEST_CASE("property: cycle witnesses are genuine cycles") {
    std::mt19937_64 rng(123);
    int cyclic = 0;
    for (int round = 0; round < 500; ++round) {
        Poset p = generators::random_poset(3 + static_cast<int>(rng() % 6), rng);
        if (p.is_cycle_free()) continue;
        ++cyclic;
        auto w = p.cycle_witness();
        REQUIRE(w.size() >= 3);
        std::set<std::string> uniq(w.begin(), w.end());
        CHECK(uniq.size() == w.size());
        auto adjacent = [&](const std::string& a, const std::string& b) {
            int ia = p.index_of(a), ib = p.index_of(b);
            const auto& nb = p.neighbours(ia);
            return std::find(nb.begin(), nb.end(), ib) != nb.end();
        };
        for (std::size_t i = 0; i + 1 < w.size(); ++i) CHECK(adjacent(w[i], w[i + 1]));
        CHECK(adjacent(w.back(), w.front()));
    }
    CHECK(cyclic > 20);
}

TEST_CASE("property: banning more elements refines the partition") {
    std::mt19937_64 rng(777);
    for (int round = 0; round < 100; ++round) {
        Poset p = generators::random_cfpo(3 + static_cast<int>(rng() % 7), rng);
        std::vector<std::string> small, big;
        for (const auto& e : p.elements()) {
            bool pick = rng() % 3 == 0;
            if (pick) small.push_back(e);
            if (pick || rng() % 3 == 0) big.push_back(e);
        }
        auto fine = p.components_avoiding(big);
        auto coarse = p.components_avoiding(small);
        for (const auto& cls : fine) {
            int hits = 0;
            for (const auto& sup : coarse)
                if (std::includes(sup.begin(), sup.end(), cls.begin(), cls.end())) ++hits;
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("property: boundary lies outside the block") {
    std::mt19937_64 rng(4242);
    for (int round = 0; round < 100; ++round) {
        Poset p = generators::random_cfpo(3 + static_cast<int>(rng() % 7), rng);
        std::vector<std::string> block;
        for (const auto& e : p.elements())
            if (rng() % 3 == 0) block.push_back(e);
        if (block.empty()) continue;
        for (const auto& z : p.boundary(block))
            CHECK(std::find(block.begin(), block.end(), z) == block.end());
    }
}
