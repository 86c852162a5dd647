#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cfpo/wreath.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace cfpo;

TEST_CASE("orders multiply across the factors") {
    WreathProduct abb(fixtures::fan5(), fixtures::point_tree("b"), fixtures::point_tree("b"));
    CHECK(abb.order() == 4); // 1^4 * 1^5 * 4

    WreathProduct e2(fixtures::chain(2), fixtures::vee(), fixtures::point_tree("t"));
    CHECK(e2.order() == 4); // 1^1 * 2^2 * 1

    WreathProduct e3(fixtures::fan5(), fixtures::point_tree("b"), fixtures::tee3());
    CHECK(e3.order() == 64); // 2^4 * 1^5 * 4

    WreathProduct e4(fixtures::fan5(), fixtures::vee(), fixtures::point_tree("t"));
    CHECK(e4.order() == 128); // 1^4 * 2^5 * 4

    WreathProduct bare(fixtures::fan5(), ChainedTree{}, ChainedTree{});
    CHECK(bare.order() == automorphism_group(fixtures::fan5()).order());
}

TEST_CASE("the action moves copies the way the components say") {
    WreathProduct e2(fixtures::chain(2), fixtures::vee(), fixtures::point_tree("t"));

    WreathElement id = e2.identity();
    for (const auto& e : e2.decorated().base.elements()) CHECK(e2.apply(id, e) == e);

    // an above-copy twist at x0: find the element whose eta[x0] swaps leaves
    bool found = false;
    for (std::uint64_t i = 0; i < e2.order(); ++i) {
        WreathElement w = e2.element_at(i);
        if (e2.apply(w, "x0/s1") == "x0/s2" && e2.apply(w, "x1/s1") == "x1/s1") {
            CHECK(e2.apply(w, "x0/s2") == "x0/s1");
            CHECK(e2.apply(w, "x0/s0") == "x0/s0");
            CHECK(e2.apply(w, "x0..x1/t") == "x0..x1/t");
            found = true;
        }
    }
    CHECK(found);

    // a skeleton swap transports whole bundles
    WreathProduct e3(fixtures::fan5(), fixtures::point_tree("b"), fixtures::tee3());
    bool swapped = false;
    for (std::uint64_t i = 0; i < e3.order() && !swapped; ++i) {
        WreathElement w = e3.element_at(i);
        if (e3.apply(w, "a0") == "a1" && e3.apply(w, "b0") == "b0") {
            CHECK(e3.apply(w, "a0..c/t0") == "a1..c/t0");
            CHECK(e3.apply(w, "a0/b") == "a1/b");
            CHECK(e3.apply(w, "c") == "c");
            swapped = true;
        }
    }
    CHECK(swapped);

    CHECK_THROWS_AS(e3.apply(e3.identity(), "nope"), InputError);
}

TEST_CASE("compose and invert satisfy the action law") {
    WreathProduct e3(fixtures::fan5(), fixtures::point_tree("b"), fixtures::tee3());
    std::mt19937_64 rng(5);
    const auto& names = e3.decorated().base.elements();
    for (int round = 0; round < 300; ++round) {
        WreathElement a = e3.element_at(rng() % e3.order());
        WreathElement b = e3.element_at(rng() % e3.order());
        WreathElement ab = e3.compose(a, b);
        const std::string& e = names[rng() % names.size()];
        CHECK(e3.apply(ab, e) == e3.apply(a, e3.apply(b, e)));

        WreathElement inv = e3.invert(a);
        CHECK(e3.apply(e3.compose(a, inv), e) == e);
        CHECK(e3.apply(e3.compose(inv, a), e) == e);
    }
}

TEST_CASE("whole-map images are automorphisms and the map is injective") {
    WreathProduct e2(fixtures::chain(2), fixtures::vee(), fixtures::point_tree("t"));
    std::set<Perm> image;
    for (std::uint64_t i = 0; i < e2.order(); ++i)
        image.insert(e2.to_permutation(e2.element_at(i)));
    CHECK(image.size() == e2.order());
}

TEST_CASE("verification reports on the curated instances") {
    WreathProduct abb(fixtures::fan5(), fixtures::point_tree("b"), fixtures::point_tree("b"));
    auto rep = abb.verify_action_isomorphism();
    CHECK(rep.homomorphism);
    CHECK(rep.injective);
    REQUIRE(rep.surjective.has_value());
    CHECK(*rep.surjective);
    CHECK(rep.wreath_order == 4);
    CHECK(rep.aut_dec_order == 4);

    WreathProduct e2(fixtures::chain(2), fixtures::vee(), fixtures::point_tree("t"));
    auto rep2 = e2.verify_action_isomorphism();
    CHECK(rep2.homomorphism);
    CHECK(rep2.injective);
    CHECK(rep2.surjective.value());
    CHECK(rep2.wreath_order == 4);
    CHECK(rep2.aut_dec_order == 4);
}

TEST_CASE("random instances: homomorphism and injectivity") {
    std::mt19937_64 rng(31337);
    int done = 0;
    for (int round = 0; round < 25; ++round) {
        Poset x = generators::random_cfpo(1 + static_cast<int>(rng() % 4), rng, "x");
        ChainedTree s = generators::random_chained_tree(static_cast<int>(rng() % 4), rng, "s");
        ChainedTree t = generators::random_chained_tree(static_cast<int>(rng() % 4), rng, "u");
        WreathProduct w(x, s, t);
        auto rep = w.verify_action_isomorphism(500, 7 + round);
        CHECK(rep.homomorphism);
        CHECK(rep.injective);
        ++done;
    }
    CHECK(done == 25);
}
