#include "cfpo/decomposition.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace cfpo {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// gate from C into one residual class B: the element of B on every path
std::vector<std::string> gate_towards(const Poset& m, const std::vector<std::string>& c,
                                      const std::vector<std::string>& b) {
    std::set<std::string> bset(b.begin(), b.end());
    std::vector<std::string> gates;
    bool first = true;
    std::set<std::string> cur;
    for (const auto& from : c)
        for (const auto& to : b) {
            auto p = m.path(from, to);
            if (!p) continue;
            std::set<std::string> on;
            for (const auto& e : *p)
                if (bset.count(e)) on.insert(e);
            if (first) {
                cur = on;
                first = false;
            } else {
                std::set<std::string> merged;
                std::set_intersection(cur.begin(), cur.end(), on.begin(), on.end(),
                                      std::inserter(merged, merged.begin()));
                cur = merged;
            }
        }
    gates.assign(cur.begin(), cur.end());
    return gates;
}

} // namespace

std::vector<ComponentVerdict> classify_components(const Poset& m,
                                                  const std::vector<std::string>& skeleton_set) {
    if (!m.is_cycle_free()) throw InputError("classify_components requires a cycle-free poset");
    auto a_sorted = sorted_unique(skeleton_set);
    if (a_sorted.empty()) throw InputError("candidate skeleton set is empty");
    std::set<std::string> aset(a_sorted.begin(), a_sorted.end());
    for (const auto& e : a_sorted)
        if (m.index_of(e) < 0) throw InputError("candidate set mentions unknown element '" + e + "'");

    std::vector<ComponentVerdict> out;
    for (auto& cls : m.components_avoiding(a_sorted)) {
        ComponentVerdict v;
        v.members = cls;
        auto gates = m.boundary(cls);
        if (gates.size() == 1) {
            if (!aset.count(gates.front())) {
                v.kind = ComponentVerdict::Kind::Violation;
                v.reason = "gate '" + gates.front() + "' is not in the candidate set";
            } else {
                v.kind = ComponentVerdict::Kind::Attached;
                v.anchor = gates.front();
            }
        } else if (gates.empty()) {
            // residual classes within C's component
            std::set<std::string> cset(cls.begin(), cls.end());
            std::vector<std::vector<std::string>> residual;
            for (auto& r : m.components_avoiding(cls)) {
                // keep only classes in the same component as C
                if (m.path(r.front(), cls.front())) residual.push_back(r);
            }
            if (residual.size() != 2) {
                v.kind = ComponentVerdict::Kind::Violation;
                v.reason = "removing the class leaves " + std::to_string(residual.size()) +
                           " residual classes (expected 2)";
            } else {
                auto g0 = gate_towards(m, cls, residual[0]);
                auto g1 = gate_towards(m, cls, residual[1]);
                if (g0.size() != 1 || g1.size() != 1) {
                    v.kind = ComponentVerdict::Kind::Violation;
                    v.reason = "residual sides are not gated by single elements";
                } else if (!aset.count(g0.front()) || !aset.count(g1.front())) {
                    v.kind = ComponentVerdict::Kind::Violation;
                    v.reason = "between-gates are not both in the candidate set";
                } else {
                    std::string lo = g0.front(), hi = g1.front();
                    if (m.less(hi, lo)) std::swap(lo, hi);
                    if (!m.less(lo, hi)) {
                        v.kind = ComponentVerdict::Kind::Violation;
                        v.reason = "between-gates '" + lo + "','" + hi + "' are incomparable";
                    } else {
                        Poset sub = m.induced(a_sorted);
                        auto ap = sub.cover_pairs_named();
                        if (std::find(ap.begin(), ap.end(), std::make_pair(lo, hi)) == ap.end()) {
                            v.kind = ComponentVerdict::Kind::Violation;
                            v.reason = "gates ('" + lo + "','" + hi +
                                       "') are not an adjacent pair of the candidate set";
                        } else {
                            v.kind = ComponentVerdict::Kind::Between;
                            v.anchor = lo;
                            v.anchor2 = hi;
                        }
                    }
                }
            }
        } else {
            v.kind = ComponentVerdict::Kind::Violation;
            v.reason = "class has " + std::to_string(gates.size()) + " universal gates";
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<std::map<std::string, std::string>>
find_order_isomorphism(const Poset& a, const Poset& b,
                       const std::map<std::string, std::string>& colors_a,
                       const std::map<std::string, std::string>& colors_b) {
    if (a.size() != b.size()) return std::nullopt;
    const int n = static_cast<int>(a.size());
    if (n == 0) return std::map<std::string, std::string>{};

    auto color_of = [](const std::map<std::string, std::string>& colors, const std::string& e) {
        auto it = colors.find(e);
        return it == colors.end() ? std::string{} : it->second;
    };

    // candidate targets by (colour, degree profile)
    auto profile = [&](const Poset& p, const std::map<std::string, std::string>& colors, int i) {
        int above = 0, below = 0;
        for (int j = 0; j < n; ++j) {
            if (p.less(i, j)) ++above;
            if (p.less(j, i)) ++below;
        }
        return std::make_tuple(color_of(colors, p.name_of(i)), above, below);
    };
    std::vector<std::vector<int>> cand(n);
    for (int i = 0; i < n; ++i) {
        auto pa = profile(a, colors_a, i);
        for (int j = 0; j < n; ++j)
            if (pa == profile(b, colors_b, j)) cand[i].push_back(j);
        if (cand[i].empty()) return std::nullopt;
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return cand[x].size() < cand[y].size(); });

    std::vector<int> img(n, -1);
    std::vector<char> used(n, 0);
    std::function<bool(int)> dfs = [&](int pos) -> bool {
        if (pos == n) return true;
        int v = order[pos];
        for (int w : cand[v]) {
            if (used[w]) continue;
            bool ok = true;
            for (int q = 0; q < pos && ok; ++q) {
                int u = order[q];
                if (a.less(u, v) != b.less(img[u], w)) ok = false;
                if (a.less(v, u) != b.less(w, img[u])) ok = false;
            }
            if (!ok) continue;
            img[v] = w;
            used[w] = 1;
            if (dfs(pos + 1)) return true;
            used[w] = 0;
            img[v] = -1;
        }
        return false;
    };
    if (!dfs(0)) return std::nullopt;

    std::map<std::string, std::string> out;
    for (int i = 0; i < n; ++i) out[a.name_of(i)] = b.name_of(img[i]);
    return out;
}

namespace {

// Relabels a bundle as a tree rooted at its unique minimum; fresh-root
// fallback keeps the construction total, the final witness check reports any
// shape mismatch.
ChainedTree bundle_to_tree(const Poset& m, const std::vector<std::string>& members,
                           const std::vector<std::string>& chain) {
    Poset sub = m.induced(members);
    // unique minimum?
    std::vector<std::string> minimals;
    for (const auto& e : sub.elements()) {
        bool minimal = true;
        for (const auto& f : sub.elements())
            if (sub.less(f, e)) minimal = false;
        if (minimal) minimals.push_back(e);
    }
    if (minimals.size() == 1) {
        ChainedTree t = ChainedTree::make(sub, minimals.front(), chain);
        if (auto v = validate_tree(t))
            throw InputError("extracted bundle is not a tree: " + v->message);
        return t;
    }
    // fresh root below everything
    std::string root = "r";
    while (sub.index_of(root) >= 0) root += "'";
    std::vector<std::string> elems = sub.elements();
    elems.push_back(root);
    std::vector<std::pair<std::string, std::string>> rel = sub.lt_pairs_named();
    for (const auto& e : sub.elements()) rel.emplace_back(root, e);
    ChainedTree t = ChainedTree::make(Poset::build(elems, rel, RelationKind::Lt), root, chain);
    if (auto v = validate_tree(t))
        throw InputError("extracted bundle is not a tree: " + v->message);
    return t;
}

} // namespace

Decomposition decompose(const Poset& m, const std::vector<std::string>& skeleton_set,
                        const SearchLimits& limits) {
    auto a_sorted = sorted_unique(skeleton_set);
    auto verdicts = classify_components(m, a_sorted);
    for (const auto& v : verdicts)
        if (v.kind == ComponentVerdict::Kind::Violation)
            throw InputError("decomposition violation on class {" + v.members.front() +
                             ", ...}: " + v.reason);

    Decomposition out;
    out.skeleton = m.induced(a_sorted);

    // group attached classes per anchor, between classes per pair
    std::map<std::string, std::vector<std::string>> attached;
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> between;
    for (const auto& v : verdicts) {
        if (v.kind == ComponentVerdict::Kind::Attached) {
            auto& bundle = attached[v.anchor];
            bundle.insert(bundle.end(), v.members.begin(), v.members.end());
        } else {
            auto key = std::make_pair(v.anchor, v.anchor2);
            if (between.count(key))
                throw InputError("two between-classes share the adjacent pair (" + v.anchor +
                                 "," + v.anchor2 + ")");
            between[key] = v.members;
        }
    }

    // above bundles: pairwise isomorphic across all anchors
    std::vector<ChainedTree> above_trees;
    for (const auto& a : a_sorted) {
        auto it = attached.find(a);
        if (it == attached.end()) {
            above_trees.push_back(ChainedTree{}); // empty bundle
            continue;
        }
        // everything attached at a must lie strictly above a
        for (const auto& e : it->second)
            if (!m.less(a, e))
                throw InputError("attached class at '" + a + "' is not strictly above it");
        above_trees.push_back(bundle_to_tree(m, it->second, {}));
    }
    for (std::size_t i = 1; i < above_trees.size(); ++i) {
        bool e0 = above_trees[0].empty(), ei = above_trees[i].empty();
        if (e0 != ei ||
            (!e0 && !find_order_isomorphism(above_trees[0].base, above_trees[i].base)))
            throw InputError("candidate set is not homogeneous: attached bundles at '" +
                             a_sorted[0] + "' and '" + a_sorted[i] + "' are not isomorphic");
    }
    out.above = above_trees.empty() ? ChainedTree{} : above_trees.front();

    // between bundles: one per adjacent pair, pairwise isomorphic (chains matching)
    auto ap = out.skeleton.cover_pairs_named();
    std::vector<ChainedTree> between_trees;
    for (auto& pr : ap) {
        auto it = between.find(pr);
        if (it == between.end()) {
            between_trees.push_back(ChainedTree{});
            continue;
        }
        auto path = m.path(pr.first, pr.second);
        if (!path) throw std::logic_error("adjacent pair without a path");
        std::vector<std::string> chain(path->begin() + 1, path->end() - 1);
        std::set<std::string> members(it->second.begin(), it->second.end());
        for (const auto& c : chain)
            if (!members.count(c))
                throw InputError("chain between (" + pr.first + "," + pr.second +
                                 ") leaves its class");
        std::sort(chain.begin(), chain.end());
        between_trees.push_back(bundle_to_tree(m, it->second, chain));
    }
    auto chain_colors = [](const ChainedTree& t) {
        std::map<std::string, std::string> colors;
        for (const auto& e : t.chain) colors[e] = "chain";
        return colors;
    };
    for (std::size_t i = 1; i < between_trees.size(); ++i) {
        bool e0 = between_trees[0].empty(), ei = between_trees[i].empty();
        if (e0 != ei ||
            (!e0 && !find_order_isomorphism(between_trees[0].base, between_trees[i].base,
                                            chain_colors(between_trees[0]),
                                            chain_colors(between_trees[i]))))
            throw InputError("candidate set is not homogeneous: between bundles at (" +
                             ap[0].first + "," + ap[0].second + ") and (" + ap[i].first + "," +
                             ap[i].second + ") are not isomorphic");
    }
    out.between = between_trees.empty() ? ChainedTree{} : between_trees.front();

    // verification: decorating back reproduces M, with labels respected
    DecoratedPoset redone = decorate(out.skeleton, out.above, out.between);
    std::map<std::string, std::string> colors_dec, colors_m;
    for (auto& [e, pv] : redone.provenance) {
        switch (pv.kind) {
        case Provenance::Kind::Skeleton: colors_dec[e] = "sk:" + e; break;
        case Provenance::Kind::Above: colors_dec[e] = "ab:" + pv.anchor; break;
        case Provenance::Kind::Between:
            colors_dec[e] = "bt:" + pv.anchor + "," + pv.anchor2;
            break;
        }
    }
    for (const auto& a : a_sorted) colors_m[a] = "sk:" + a;
    for (const auto& v : verdicts) {
        for (const auto& e : v.members) {
            if (v.kind == ComponentVerdict::Kind::Attached) colors_m[e] = "ab:" + v.anchor;
            else colors_m[e] = "bt:" + v.anchor + "," + v.anchor2;
        }
    }
    auto wit = find_order_isomorphism(redone.base, m, colors_dec, colors_m);
    if (!wit)
        throw InputError("input is not isomorphic to the decoration rebuilt from it");
    out.witness = *wit;

    if (m.size() <= static_cast<std::size_t>(limits.max_degree)) {
        auto aut = automorphism_group(m, {}, {}, limits);
        auto rep = orbit_report(aut, m, a_sorted);
        out.transitive_on_set = rep.transitive_on_set;
        out.transitive_on_adjacent_pairs = rep.transitive_on_adjacent_pairs;
    }
    return out;
}

} // namespace cfpo
