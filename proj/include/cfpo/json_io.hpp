#pragma once

#include <string>

#include <json.hpp>

#include "cfpo/chained_tree.hpp"
#include "cfpo/decoration.hpp"
#include "cfpo/perm_group.hpp"

namespace cfpo {

using nlohmann::json;

// Poset / ChainedTree file schema:
//   {"name": ..., "elements": [...],
//    "relation": {"kind": "covers"|"lt", "pairs": [[a,b], ...]},
//    "root": ... (optional), "chain": [...] (optional)}
// DecoratedPoset adds
//   "provenance": {elem: {"kind","anchor","anchor2","source","onChain"}}

json poset_to_json(const Poset& p, const std::string& name = "");
Poset poset_from_json(const json& j);

json tree_to_json(const ChainedTree& t, const std::string& name = "");
ChainedTree tree_from_json(const json& j);

json decorated_to_json(const DecoratedPoset& d, const std::string& name = "");
DecoratedPoset decorated_from_json(const json& j);

json group_to_json(const PermGroup& g);
PermGroup group_from_json(const json& j, const SearchLimits& limits = {});

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

/// Is this file a decorated poset (has provenance) or a plain poset/tree?
bool json_is_decorated(const json& j);

} // namespace cfpo
