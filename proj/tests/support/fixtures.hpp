#pragma once

// Shared fixtures: the 5-point fan skeleton, the one-point poset, the small
// trees, and the three curated decorations built from them.

#include "cfpo/chained_tree.hpp"
#include "cfpo/decoration.hpp"
#include "cfpo/poset.hpp"

namespace fixtures {

using cfpo::ChainedTree;
using cfpo::DecoratedPoset;
using cfpo::Poset;
using cfpo::RelationKind;

// a0, a1 < c < b0, b1
inline Poset fan5() {
    return Poset::build({"a0", "a1", "c", "b0", "b1"},
                        {{"a0", "c"}, {"a1", "c"}, {"c", "b0"}, {"c", "b1"}},
                        RelationKind::Covers);
}

inline Poset point(const std::string& name = "pt") {
    return Poset::build({name}, {}, RelationKind::Covers);
}

inline Poset chain(int n, const std::string& prefix = "x") {
    std::vector<std::string> elems;
    std::vector<std::pair<std::string, std::string>> covers;
    for (int i = 0; i < n; ++i) elems.push_back(prefix + std::to_string(i));
    for (int i = 0; i + 1 < n; ++i) covers.emplace_back(elems[i], elems[i + 1]);
    return Poset::build(elems, covers, RelationKind::Covers);
}

inline Poset antichain(int n, const std::string& prefix = "x") {
    std::vector<std::string> elems;
    for (int i = 0; i < n; ++i) elems.push_back(prefix + std::to_string(i));
    return Poset::build(elems, {}, RelationKind::Covers);
}

inline Poset diamond() {
    return Poset::build({"a", "b", "c", "d"}, {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}},
                        RelationKind::Covers);
}

// root s0 with incomparable children s1, s2
inline ChainedTree vee() {
    return ChainedTree::make(
        Poset::build({"s0", "s1", "s2"}, {{"s0", "s1"}, {"s0", "s2"}}, RelationKind::Covers));
}

// root t0, chain {t0,t1}, leaves w1,w2 covering t0
inline ChainedTree tee3() {
    return ChainedTree::make(
        Poset::build({"t0", "t1", "w1", "w2"}, {{"t0", "t1"}, {"t0", "w1"}, {"t0", "w2"}},
                     RelationKind::Covers),
        "t0", {"t0", "t1"});
}

inline ChainedTree point_tree(const std::string& name = "pt") {
    return ChainedTree::make(point(name));
}

// Dec(2-chain, vee, point): 9 elements
inline DecoratedPoset e2() { return cfpo::decorate(chain(2), vee(), point_tree("t")); }

// Dec(fan5, point, tee3): 26 elements
inline DecoratedPoset e3() { return cfpo::decorate(fan5(), point_tree("b"), tee3()); }

// Dec(fan5, vee, point): 24 elements
inline DecoratedPoset e4() { return cfpo::decorate(fan5(), vee(), point_tree("t")); }

// Dec(fan5, point, point): the 14-element example
inline DecoratedPoset dec_abb() { return cfpo::decorate(fan5(), point_tree("b"), point_tree("b")); }

} // namespace fixtures
