#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfpo/decoration.hpp"
#include "cfpo/perm_group.hpp"

namespace cfpo {

struct ComponentVerdict {
    enum class Kind { Attached, Between, Violation };
    Kind kind = Kind::Violation;
    std::vector<std::string> members; // the class C, sorted
    std::string anchor;               // attached gate, or lower between-anchor
    std::string anchor2;              // upper between-anchor
    std::string reason;               // violation text
};

/// For each class of ~_A on M \ A: attached at a single gate in A, glued
/// between an adjacent pair of A, or a violation with the reason.
std::vector<ComponentVerdict> classify_components(const Poset& m,
                                                  const std::vector<std::string>& skeleton_set);

struct Decomposition {
    Poset skeleton;
    ChainedTree above;   // empty when nothing is attached
    ChainedTree between; // empty when nothing is glued
    /// Witness: decorate(skeleton, above, between) element -> element of M.
    std::map<std::string, std::string> witness;
    /// Advisory transitivity flags of Aut(M) on the candidate set.
    std::optional<bool> transitive_on_set;
    std::optional<bool> transitive_on_adjacent_pairs;
};

/// Extract (X, S, (T,L)) from M and a candidate skeleton set, verifying that
/// decorating them back reproduces M (labelled isomorphism witness returned).
/// Throws InputError on verdict violations, bundle non-uniformity, or when M
/// is not decoration-shaped.
Decomposition decompose(const Poset& m, const std::vector<std::string>& skeleton_set,
                        const SearchLimits& limits = {});

/// Order isomorphism respecting an optional colouring; used for bundle
/// uniformity and for round-trip verification.
std::optional<std::map<std::string, std::string>>
find_order_isomorphism(const Poset& a, const Poset& b,
                       const std::map<std::string, std::string>& colors_a = {},
                       const std::map<std::string, std::string>& colors_b = {});

} // namespace cfpo
