#pragma once

#include <string>

#include "cfpo/chained_tree.hpp"
#include "cfpo/decoration.hpp"

namespace cfpo {

/// Hasse diagram as deterministic DOT. Nodes are ranked by height; skeleton
/// elements are boxes, chain elements diamonds, everything else ellipses.
std::string export_dot(const DecoratedPoset& d, const std::string& graph_name = "hasse");
std::string export_dot(const Poset& p, const std::string& graph_name = "hasse");
std::string export_dot(const ChainedTree& t, const std::string& graph_name = "hasse");

} // namespace cfpo
