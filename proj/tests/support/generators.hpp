#pragma once

// Deterministic random instance generators for the property suites.

#include <random>
#include <string>
#include <vector>

#include "cfpo/chained_tree.hpp"
#include "cfpo/poset.hpp"

namespace generators {

inline std::string padded(const std::string& prefix, int i) {
    std::string n = std::to_string(i);
    if (n.size() < 2) n = "0" + n; // keeps lexicographic = numeric order
    return prefix + n;
}

/// Random cycle-free poset: a random forest shape with random edge
/// orientations. Tree edges stay cover edges under closure, so the cover
/// graph is exactly the forest.
inline cfpo::Poset random_cfpo(int n, std::mt19937_64& rng, const std::string& prefix = "n",
                               bool connected = true) {
    std::vector<std::string> elems;
    for (int i = 0; i < n; ++i) elems.push_back(padded(prefix, i));
    std::vector<std::pair<std::string, std::string>> covers;
    for (int i = 1; i < n; ++i) {
        if (!connected && rng() % 4 == 0) continue; // start a new component
        int parent = static_cast<int>(rng() % i);
        if (rng() % 2)
            covers.emplace_back(elems[parent], elems[i]);
        else
            covers.emplace_back(elems[i], elems[parent]);
    }
    return cfpo::Poset::build(elems, covers, cfpo::RelationKind::Covers);
}

/// Random rooted tree with a maximal chain picked by a random root-to-leaf walk.
inline cfpo::ChainedTree random_chained_tree(int n, std::mt19937_64& rng,
                                             const std::string& prefix = "t") {
    if (n == 0) return cfpo::ChainedTree{};
    std::vector<std::string> elems;
    for (int i = 0; i < n; ++i) elems.push_back(padded(prefix, i));
    std::vector<int> parent(n, -1);
    std::vector<std::pair<std::string, std::string>> covers;
    for (int i = 1; i < n; ++i) {
        parent[i] = static_cast<int>(rng() % i);
        covers.emplace_back(elems[parent[i]], elems[i]);
    }
    // random walk down from the root picks a maximal chain
    std::vector<std::string> chain{elems[0]};
    int at = 0;
    for (;;) {
        std::vector<int> kids;
        for (int i = 1; i < n; ++i)
            if (parent[i] == at) kids.push_back(i);
        if (kids.empty()) break;
        at = kids[rng() % kids.size()];
        chain.push_back(elems[at]);
    }
    return cfpo::ChainedTree::make(
        cfpo::Poset::build(elems, covers, cfpo::RelationKind::Covers), elems[0], chain);
}

/// Random poset (not necessarily cycle-free): edges added along a random
/// topological order, then closed.
inline cfpo::Poset random_poset(int n, std::mt19937_64& rng, const std::string& prefix = "n") {
    std::vector<std::string> elems;
    for (int i = 0; i < n; ++i) elems.push_back(padded(prefix, i));
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::pair<std::string, std::string>> lt;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng() % 3 == 0) lt.emplace_back(elems[order[i]], elems[order[j]]);
    return cfpo::Poset::build(elems, lt, cfpo::RelationKind::Lt);
}

} // namespace generators
