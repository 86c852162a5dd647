#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfpo/poset.hpp"

namespace cfpo {

/// Rooted semilinear order with an optional distinguished maximal chain.
/// Plain trees (used as above-decorations) leave the chain empty; trees glued
/// between adjacent pairs need one. When the tree has exactly one maximal
/// chain it is filled in automatically.
struct ChainedTree {
    Poset base;
    std::string root;
    std::vector<std::string> chain; // sorted by name; empty = unused

    bool empty() const { return base.empty(); }

    /// Chain elements in order, bottom (root) first.
    std::vector<std::string> chain_bottom_up() const;

    static ChainedTree make(Poset base,
                            std::optional<std::string> root = std::nullopt,
                            std::vector<std::string> chain = {});
};

struct TreeViolation {
    std::string message;
};

/// Checks the ChainedTree invariants: unique minimal root below everything,
/// strict down-sets are chains, and (when present) the chain is a maximal
/// chain containing the root. Returns the first violation found.
std::optional<TreeViolation> validate_tree(const ChainedTree& t);

} // namespace cfpo
