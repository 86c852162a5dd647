#pragma once

#include <map>
#include <string>
#include <vector>

#include "cfpo/chained_tree.hpp"
#include "cfpo/poset.hpp"

namespace cfpo {

struct Provenance {
    enum class Kind { Skeleton, Above, Between };
    Kind kind = Kind::Skeleton;
    std::string anchor;  // skeleton point (Above), lower anchor (Between)
    std::string anchor2; // upper anchor (Between only)
    std::string source;  // node of S resp. T this element copies
    bool on_chain = false;
};

/// A poset together with where each element came from in the gluing.
struct DecoratedPoset {
    Poset base;
    std::map<std::string, Provenance> provenance;

    std::vector<std::string> skeleton_elements() const;
    /// Elements of the copy of S above x, resp. of T between (x,y).
    std::vector<std::string> above_copy(const std::string& x) const;
    std::vector<std::string> between_copy(const std::string& x, const std::string& y) const;
};

/// Glue a copy of `above` over every point of `skeleton` and a copy of
/// `between` (along its chain) into every adjacent pair. Either tree may be
/// empty. The result is always cycle-free; violations indicate bad inputs.
DecoratedPoset decorate(const Poset& skeleton, const ChainedTree& above,
                        const ChainedTree& between);

/// Induced suborder on the skeleton-labelled elements.
Poset skeleton_of(const DecoratedPoset& d);

struct JoinRichReport {
    bool join_rich = false;
    std::vector<std::string> non_join_points; // sorted
};

/// Is every element the least upper bound of two incomparable elements?
JoinRichReport is_join_rich(const Poset& p);

} // namespace cfpo
