#include "cfpo/dot_export.hpp"

#include <map>
#include <set>
#include <sstream>

namespace cfpo {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string render(const Poset& p, const std::map<std::string, std::string>& shape,
                   const std::string& graph_name) {
    std::ostringstream os;
    os << "digraph " << quoted(graph_name) << " {\n";
    os << "  rankdir=BT;\n";
    os << "  node [shape=ellipse];\n";
    auto h = p.heights();
    std::map<int, std::set<std::string>> by_height;
    for (std::size_t i = 0; i < p.size(); ++i) by_height[h[i]].insert(p.name_of(static_cast<int>(i)));

    for (const auto& e : p.elements()) {
        os << "  " << quoted(e);
        auto it = shape.find(e);
        if (it != shape.end()) os << " [shape=" << it->second << "]";
        os << ";\n";
    }
    for (auto& [rank, members] : by_height) {
        os << "  { rank=same;";
        for (const auto& e : members) os << " " << quoted(e) << ";";
        os << " }\n";
    }
    for (auto& [a, b] : p.cover_pairs_named())
        os << "  " << quoted(a) << " -> " << quoted(b) << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace

std::string export_dot(const DecoratedPoset& d, const std::string& graph_name) {
    std::map<std::string, std::string> shape;
    for (auto& [e, pv] : d.provenance) {
        if (pv.kind == Provenance::Kind::Skeleton) shape[e] = "box";
        else if (pv.kind == Provenance::Kind::Between && pv.on_chain) shape[e] = "diamond";
    }
    return render(d.base, shape, graph_name);
}

std::string export_dot(const Poset& p, const std::string& graph_name) {
    return render(p, {}, graph_name);
}

std::string export_dot(const ChainedTree& t, const std::string& graph_name) {
    std::map<std::string, std::string> shape;
    for (const auto& e : t.chain) shape[e] = "diamond";
    return render(t.base, shape, graph_name);
}

} // namespace cfpo
