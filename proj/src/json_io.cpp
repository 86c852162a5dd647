#include "cfpo/json_io.hpp"

#include <fstream>

namespace cfpo {

namespace {

std::vector<std::pair<std::string, std::string>> pairs_from(const json& rel) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : rel.at("pairs")) {
        if (!p.is_array() || p.size() != 2)
            throw InputError("relation pair must be a two-element array");
        out.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    return out;
}

RelationKind kind_from(const json& rel) {
    auto k = rel.at("kind").get<std::string>();
    if (k == "covers") return RelationKind::Covers;
    if (k == "lt") return RelationKind::Lt;
    throw InputError("relation kind must be 'covers' or 'lt'");
}

} // namespace

json poset_to_json(const Poset& p, const std::string& name) {
    json j;
    if (!name.empty()) j["name"] = name;
    j["elements"] = p.elements();
    json pairs = json::array();
    for (auto& [a, b] : p.cover_pairs_named()) pairs.push_back(json::array({a, b}));
    j["relation"] = {{"kind", "covers"}, {"pairs", pairs}};
    return j;
}

Poset poset_from_json(const json& j) {
    try {
        std::vector<std::string> elems = j.at("elements").get<std::vector<std::string>>();
        const json& rel = j.at("relation");
        return Poset::build(std::move(elems), pairs_from(rel), kind_from(rel));
    } catch (const json::exception& e) {
        throw InputError(std::string("bad poset JSON: ") + e.what());
    }
}

json tree_to_json(const ChainedTree& t, const std::string& name) {
    json j = poset_to_json(t.base, name);
    if (!t.root.empty()) j["root"] = t.root;
    if (!t.chain.empty()) j["chain"] = t.chain;
    return j;
}

ChainedTree tree_from_json(const json& j) {
    Poset base = poset_from_json(j);
    std::optional<std::string> root;
    if (j.contains("root")) root = j.at("root").get<std::string>();
    std::vector<std::string> chain;
    if (j.contains("chain")) chain = j.at("chain").get<std::vector<std::string>>();
    ChainedTree t = ChainedTree::make(std::move(base), root, std::move(chain));
    if (auto v = validate_tree(t)) throw InputError("invalid tree: " + v->message);
    return t;
}

json decorated_to_json(const DecoratedPoset& d, const std::string& name) {
    json j = poset_to_json(d.base, name);
    json prov;
    for (auto& [e, pv] : d.provenance) {
        json q;
        switch (pv.kind) {
        case Provenance::Kind::Skeleton: q["kind"] = "skeleton"; break;
        case Provenance::Kind::Above: q["kind"] = "above"; break;
        case Provenance::Kind::Between: q["kind"] = "between"; break;
        }
        if (!pv.anchor.empty()) q["anchor"] = pv.anchor;
        if (!pv.anchor2.empty()) q["anchor2"] = pv.anchor2;
        if (!pv.source.empty()) q["source"] = pv.source;
        if (pv.kind == Provenance::Kind::Between) q["onChain"] = pv.on_chain;
        prov[e] = q;
    }
    j["provenance"] = prov;
    return j;
}

DecoratedPoset decorated_from_json(const json& j) {
    DecoratedPoset d;
    d.base = poset_from_json(j);
    if (!j.contains("provenance")) {
        // plain poset: everything counts as skeleton
        for (const auto& e : d.base.elements())
            d.provenance[e] = Provenance{Provenance::Kind::Skeleton, "", "", "", false};
        return d;
    }
    for (auto& [e, q] : j.at("provenance").items()) {
        if (d.base.index_of(e) < 0)
            throw InputError("provenance mentions unknown element '" + e + "'");
        Provenance pv;
        auto k = q.at("kind").get<std::string>();
        if (k == "skeleton") pv.kind = Provenance::Kind::Skeleton;
        else if (k == "above") pv.kind = Provenance::Kind::Above;
        else if (k == "between") pv.kind = Provenance::Kind::Between;
        else throw InputError("provenance kind must be skeleton/above/between");
        if (q.contains("anchor")) pv.anchor = q.at("anchor").get<std::string>();
        if (q.contains("anchor2")) pv.anchor2 = q.at("anchor2").get<std::string>();
        if (q.contains("source")) pv.source = q.at("source").get<std::string>();
        if (q.contains("onChain")) pv.on_chain = q.at("onChain").get<bool>();
        d.provenance[e] = pv;
    }
    if (d.provenance.size() != d.base.size())
        throw InputError("provenance must cover every element");
    return d;
}

json group_to_json(const PermGroup& g) {
    json j;
    j["domain"] = g.domain();
    j["order"] = g.order();
    json gens = json::array();
    for (const auto& p : g.generators()) {
        json m;
        for (int i = 0; i < p.degree(); ++i) m[g.domain()[i]] = g.domain()[p(i)];
        gens.push_back(m);
    }
    j["generators"] = gens;
    return j;
}

PermGroup group_from_json(const json& j, const SearchLimits& limits) {
    try {
        std::vector<std::string> domain = j.at("domain").get<std::vector<std::string>>();
        std::sort(domain.begin(), domain.end());
        std::vector<Perm> gens;
        for (const auto& m : j.at("generators")) {
            Perm p = Perm::identity(static_cast<int>(domain.size()));
            for (auto& [from, to] : m.items()) {
                auto fi = std::lower_bound(domain.begin(), domain.end(), from);
                auto ti = std::lower_bound(domain.begin(), domain.end(), to.get<std::string>());
                if (fi == domain.end() || *fi != from || ti == domain.end() ||
                    *ti != to.get<std::string>())
                    throw InputError("generator mentions unknown element");
                p.img[fi - domain.begin()] = static_cast<int>(ti - domain.begin());
            }
            std::vector<int> seen(domain.size(), 0);
            for (int v : p.img)
                if (v < 0 || v >= static_cast<int>(domain.size()) || seen[v]++)
                    throw InputError("generator is not a bijection");
            gens.push_back(std::move(p));
        }
        PermGroup g = PermGroup::generated(domain, gens, limits);
        if (j.contains("order") && j.at("order").get<std::size_t>() != g.order())
            throw InputError("group order does not match its generators");
        return g;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad group JSON: ") + e.what());
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("cannot parse '" + path + "': " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

bool json_is_decorated(const json& j) { return j.contains("provenance"); }

} // namespace cfpo
