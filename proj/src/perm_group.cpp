#include "cfpo/perm_group.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace cfpo {

Perm Perm::identity(int n) {
    Perm p;
    p.img.resize(n);
    std::iota(p.img.begin(), p.img.end(), 0);
    return p;
}

bool Perm::is_identity() const {
    for (int i = 0; i < degree(); ++i)
        if (img[i] != i) return false;
    return true;
}

Perm compose(const Perm& a, const Perm& b) {
    Perm c;
    c.img.resize(a.img.size());
    for (std::size_t i = 0; i < a.img.size(); ++i) c.img[i] = a.img[b.img[i]];
    return c;
}

Perm inverse(const Perm& a) {
    Perm c;
    c.img.resize(a.img.size());
    for (std::size_t i = 0; i < a.img.size(); ++i) c.img[a.img[i]] = static_cast<int>(i);
    return c;
}

PermGroup PermGroup::trivial(std::vector<std::string> domain) {
    std::sort(domain.begin(), domain.end());
    PermGroup g;
    int n = static_cast<int>(domain.size());
    g.domain_ = std::move(domain);
    g.elements_ = {Perm::identity(n)};
    return g;
}

PermGroup PermGroup::generated(std::vector<std::string> domain, std::vector<Perm> gens,
                               const SearchLimits& limits) {
    std::sort(domain.begin(), domain.end());
    const int n = static_cast<int>(domain.size());
    std::set<Perm> closed{Perm::identity(n)};
    std::vector<Perm> frontier(closed.begin(), closed.end());
    for (auto& g : gens)
        if (closed.insert(g).second) frontier.push_back(g);
    while (!frontier.empty()) {
        std::vector<Perm> next;
        for (const auto& f : frontier)
            for (const auto& g : gens) {
                Perm p = compose(f, g);
                if (closed.insert(p).second) {
                    if (closed.size() > limits.max_order)
                        throw BudgetError("group materialization exceeds max order");
                    next.push_back(std::move(p));
                }
            }
        frontier = std::move(next);
    }
    PermGroup out;
    out.domain_ = std::move(domain);
    out.elements_.assign(closed.begin(), closed.end());
    out.pick_generators();
    return out;
}

PermGroup PermGroup::from_elements(std::vector<std::string> domain, std::vector<Perm> elems) {
    std::sort(domain.begin(), domain.end());
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    PermGroup out;
    out.domain_ = std::move(domain);
    out.elements_ = std::move(elems);
    out.pick_generators();
    return out;
}

void PermGroup::pick_generators() {
    generators_.clear();
    if (elements_.size() <= 1) return;
    const int n = degree();
    std::set<Perm> span{Perm::identity(n)};
    for (const auto& e : elements_) {
        if (span.count(e)) continue;
        generators_.push_back(e);
        // re-close
        std::vector<Perm> frontier(span.begin(), span.end());
        span.insert(e);
        frontier.push_back(e);
        while (!frontier.empty()) {
            std::vector<Perm> next;
            for (const auto& f : frontier)
                for (const auto& g : generators_) {
                    Perm p = compose(f, g);
                    if (span.insert(p).second) next.push_back(std::move(p));
                }
            frontier = std::move(next);
        }
        if (span.size() == elements_.size()) break;
    }
}

bool PermGroup::contains(const Perm& p) const { return element_index(p) >= 0; }

int PermGroup::element_index(const Perm& p) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
    if (it == elements_.end() || !(*it == p)) return -1;
    return static_cast<int>(it - elements_.begin());
}

std::string PermGroup::image_name(const Perm& p, const std::string& e) const {
    auto it = std::lower_bound(domain_.begin(), domain_.end(), e);
    if (it == domain_.end() || *it != e) throw InputError("unknown element '" + e + "'");
    return domain_[p.img[it - domain_.begin()]];
}

// ---------------------------------------------------------------------------
// automorphism search

namespace {

struct Refinement {
    std::vector<std::uint64_t> invariant; // per element
};

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

Refinement refine(const Poset& p, const std::map<std::string, std::string>& colors,
                  const std::map<std::string, std::set<std::string>>& predicates) {
    const int n = static_cast<int>(p.size());
    std::vector<std::uint64_t> inv(n, 0);

    auto h = p.heights();
    std::vector<int> depth(n, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [i, j] : p.cover_pairs())
            if (depth[i] < depth[j] + 1) {
                depth[i] = depth[j] + 1;
                changed = true;
            }
    }

    for (int i = 0; i < n; ++i) {
        int up = 0, down = 0, above = 0, below = 0;
        for (int j = 0; j < n; ++j) {
            if (p.less(i, j)) ++above;
            if (p.less(j, i)) ++below;
        }
        for (auto& [a, b] : p.cover_pairs()) {
            if (a == i) ++up;
            if (b == i) ++down;
        }
        std::uint64_t v = 1;
        v = mix(v, up);
        v = mix(v, down);
        v = mix(v, above);
        v = mix(v, below);
        v = mix(v, h[i]);
        v = mix(v, depth[i]);
        if (auto it = colors.find(p.name_of(i)); it != colors.end())
            v = mix(v, std::hash<std::string>{}(it->second));
        std::uint64_t pm = 0, bit = 1;
        for (auto& [name, members] : predicates) {
            if (members.count(p.name_of(i))) pm |= bit;
            bit <<= 1;
        }
        v = mix(v, pm);
        inv[i] = v;
    }

    // iterated neighbour-multiset hashing over the cover graph
    for (int round = 0; round < n; ++round) {
        std::vector<std::uint64_t> next(n);
        for (int i = 0; i < n; ++i) {
            std::vector<std::uint64_t> ups, downs;
            for (auto& [a, b] : p.cover_pairs()) {
                if (a == i) ups.push_back(inv[b]);
                if (b == i) downs.push_back(inv[a]);
            }
            std::sort(ups.begin(), ups.end());
            std::sort(downs.begin(), downs.end());
            std::uint64_t v = mix(inv[i], 0xabcdef);
            for (auto u : ups) v = mix(v, u);
            v = mix(v, 0x5555);
            for (auto d : downs) v = mix(v, d);
            next[i] = v;
        }
        if (next == inv) break;
        inv = std::move(next);
    }
    return Refinement{std::move(inv)};
}

} // namespace

PermGroup automorphism_group(const Poset& p, const std::map<std::string, std::string>& colors,
                             const std::map<std::string, std::set<std::string>>& predicates,
                             const SearchLimits& limits) {
    const int n = static_cast<int>(p.size());
    if (n > limits.max_degree)
        throw BudgetError("automorphism search size bound exceeded (" + std::to_string(n) + " > " +
                          std::to_string(limits.max_degree) + ")");
    if (n == 0) return PermGroup::trivial({});

    auto ref = refine(p, colors, predicates);
    std::vector<std::vector<int>> cells; // candidate targets per invariant class
    std::unordered_map<std::uint64_t, int> cell_of;
    std::vector<int> cell_idx(n);
    for (int i = 0; i < n; ++i) {
        auto it = cell_of.find(ref.invariant[i]);
        if (it == cell_of.end()) {
            it = cell_of.emplace(ref.invariant[i], static_cast<int>(cells.size())).first;
            cells.push_back({});
        }
        cell_idx[i] = it->second;
        cells[it->second].push_back(i);
    }

    // assign small cells first
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        auto sa = cells[cell_idx[a]].size(), sb = cells[cell_idx[b]].size();
        if (sa != sb) return sa < sb;
        return a < b;
    });

    std::vector<Perm> found;
    std::vector<int> img(n, -1);
    std::vector<char> used(n, 0);

    std::function<void(int)> dfs = [&](int pos) {
        if (pos == n) {
            Perm perm;
            perm.img = img;
            found.push_back(std::move(perm));
            if (found.size() > limits.max_order)
                throw BudgetError("automorphism group exceeds max order");
            return;
        }
        int v = order[pos];
        for (int w : cells[cell_idx[v]]) {
            if (used[w]) continue;
            bool ok = true;
            for (int q = 0; q < pos && ok; ++q) {
                int u = order[q];
                if (p.less(u, v) != p.less(img[u], w)) ok = false;
                if (p.less(v, u) != p.less(w, img[u])) ok = false;
            }
            if (!ok) continue;
            img[v] = w;
            used[w] = 1;
            dfs(pos + 1);
            used[w] = 0;
            img[v] = -1;
        }
    };
    dfs(0);

    return PermGroup::from_elements(std::vector<std::string>(p.elements().begin(), p.elements().end()),
                                    std::move(found));
}

// ---------------------------------------------------------------------------

OrbitReport orbit_report(const PermGroup& g, const Poset& host,
                         const std::vector<std::string>& set) {
    OrbitReport rep;
    std::vector<int> ids;
    for (auto& e : set) {
        auto it = std::lower_bound(g.domain().begin(), g.domain().end(), e);
        if (it == g.domain().end() || *it != e)
            throw InputError("orbit set mentions unknown element '" + e + "'");
        ids.push_back(static_cast<int>(it - g.domain().begin()));
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::set<int> pending(ids.begin(), ids.end());
    std::set<int> in_set(ids.begin(), ids.end());
    while (!pending.empty()) {
        int seed = *pending.begin();
        std::set<int> orbit;
        for (const auto& e : g.elements())
            if (in_set.count(e(seed))) orbit.insert(e(seed));
        std::vector<std::string> named;
        for (int i : orbit) {
            named.push_back(g.domain()[i]);
            pending.erase(i);
        }
        rep.orbits.push_back(std::move(named));
    }
    std::sort(rep.orbits.begin(), rep.orbits.end());
    rep.transitive_on_set = rep.orbits.size() <= 1;

    // pair transitivity on the adjacent pairs of the induced suborder
    auto sub = host.induced(set);
    auto ap = sub.cover_pairs_named();
    if (!ap.empty()) {
        std::set<std::pair<std::string, std::string>> all(ap.begin(), ap.end());
        std::set<std::pair<std::string, std::string>> orbit;
        for (const auto& e : g.elements()) {
            auto im = std::make_pair(g.image_name(e, ap.front().first),
                                     g.image_name(e, ap.front().second));
            if (all.count(im)) orbit.insert(im);
        }
        rep.transitive_on_adjacent_pairs = orbit.size() == all.size();
    } else {
        rep.transitive_on_adjacent_pairs = true;
    }
    return rep;
}

PermGroup stabilizer(const PermGroup& g, const std::vector<std::string>& set,
                     StabilizerMode mode) {
    std::vector<int> ids;
    for (auto& e : set) {
        auto it = std::lower_bound(g.domain().begin(), g.domain().end(), e);
        if (it == g.domain().end() || *it != e)
            throw InputError("stabilizer set mentions unknown element '" + e + "'");
        ids.push_back(static_cast<int>(it - g.domain().begin()));
    }
    std::set<int> idset(ids.begin(), ids.end());
    std::vector<Perm> keep;
    for (const auto& e : g.elements()) {
        bool ok = true;
        if (mode == StabilizerMode::Pointwise) {
            for (int i : ids)
                if (e(i) != i) ok = false;
        } else {
            for (int i : ids)
                if (!idset.count(e(i))) ok = false;
        }
        if (ok) keep.push_back(e);
    }
    return PermGroup::from_elements(g.domain(), std::move(keep));
}

// ---------------------------------------------------------------------------
// subgroup enumeration over a multiplication table

namespace {

struct GroupTable {
    int order = 0;
    std::vector<int> mul; // order x order
    std::vector<int> inv;
    int at(int a, int b) const { return mul[static_cast<std::size_t>(a) * order + b]; }
};

GroupTable make_table(const PermGroup& g) {
    GroupTable t;
    t.order = static_cast<int>(g.order());
    t.mul.resize(static_cast<std::size_t>(t.order) * t.order);
    t.inv.resize(t.order);
    for (int a = 0; a < t.order; ++a) {
        for (int b = 0; b < t.order; ++b) {
            int c = g.element_index(compose(g.elements()[a], g.elements()[b]));
            assert(c >= 0);
            t.mul[static_cast<std::size_t>(a) * t.order + b] = c;
        }
        t.inv[a] = g.element_index(inverse(g.elements()[a]));
    }
    return t;
}

using Members = std::vector<char>;

Members close_under(const GroupTable& t, Members seed) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < t.order; ++a) {
            if (!seed[a]) continue;
            for (int b = 0; b < t.order; ++b) {
                if (!seed[b]) continue;
                int c = t.at(a, b);
                if (!seed[c]) {
                    seed[c] = 1;
                    changed = true;
                }
            }
        }
    }
    return seed;
}

} // namespace

std::vector<PermGroup> all_subgroups(const PermGroup& g, const SearchLimits& limits) {
    if (g.order() > limits.max_subgroup_order)
        throw BudgetError("subgroup enumeration bound exceeded (order " +
                          std::to_string(g.order()) + ")");
    GroupTable t = make_table(g);
    int id = -1;
    for (int i = 0; i < t.order; ++i)
        if (g.elements()[i].is_identity()) id = i;
    assert(id >= 0);

    std::set<Members> subs;
    Members triv(t.order, 0);
    triv[id] = 1;
    subs.insert(triv);
    std::vector<Members> frontier{triv};
    while (!frontier.empty()) {
        std::vector<Members> next;
        for (const auto& h : frontier) {
            for (int x = 0; x < t.order; ++x) {
                if (h[x]) continue;
                Members seed = h;
                seed[x] = 1;
                seed[t.inv[x]] = 1;
                Members ext = close_under(t, seed);
                if (subs.insert(ext).second) next.push_back(std::move(ext));
            }
        }
        frontier = std::move(next);
    }

    std::vector<PermGroup> out;
    out.reserve(subs.size());
    for (const auto& m : subs) {
        std::vector<Perm> elems;
        for (int i = 0; i < t.order; ++i)
            if (m[i]) elems.push_back(g.elements()[i]);
        out.push_back(PermGroup::from_elements(g.domain(), std::move(elems)));
    }
    std::sort(out.begin(), out.end(), [](const PermGroup& a, const PermGroup& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.elements() < b.elements();
    });
    return out;
}

// ---------------------------------------------------------------------------
// abstract isomorphism by generator-image backtracking

namespace {

int element_order(const GroupTable& t, int id, int x) {
    int o = 1, c = x;
    while (c != id) {
        c = t.at(c, x);
        ++o;
    }
    return o;
}

} // namespace

std::optional<std::vector<int>> find_group_isomorphism(const PermGroup& g, const PermGroup& h,
                                                       const SearchLimits& limits) {
    if (g.order() != h.order()) return std::nullopt;
    if (g.order() > limits.max_iso_order)
        throw BudgetError("isomorphism search bound exceeded");
    GroupTable tg = make_table(g), th = make_table(h);
    const int n = tg.order;
    int idg = -1, idh = -1;
    for (int i = 0; i < n; ++i) {
        if (g.elements()[i].is_identity()) idg = i;
        if (h.elements()[i].is_identity()) idh = i;
    }

    std::vector<int> og(n), oh(n);
    for (int i = 0; i < n; ++i) {
        og[i] = element_order(tg, idg, i);
        oh[i] = element_order(th, idh, i);
    }
    {
        auto a = og, b = oh;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return std::nullopt;
    }

    // generating sequence of g: extend closure greedily
    std::vector<int> gens;
    {
        std::vector<char> span(n, 0);
        span[idg] = 1;
        int covered = 1;
        while (covered < n) {
            int pick = -1;
            for (int i = 0; i < n; ++i)
                if (!span[i]) {
                    pick = i;
                    break;
                }
            gens.push_back(pick);
            Members m(span.begin(), span.end());
            m[pick] = 1;
            m = close_under(tg, m);
            covered = 0;
            for (int i = 0; i < n; ++i) {
                span[i] = m[i];
                covered += m[i];
            }
        }
    }

    std::vector<int> map(n, -1), rmap(n, -1);

    // propagate products of mapped elements; false on conflict
    std::function<bool()> saturate = [&]() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int a = 0; a < n; ++a) {
                if (map[a] < 0) continue;
                for (int b = 0; b < n; ++b) {
                    if (map[b] < 0) continue;
                    int c = tg.at(a, b);
                    int cc = th.at(map[a], map[b]);
                    if (map[c] < 0) {
                        if (rmap[cc] >= 0) return false;
                        map[c] = cc;
                        rmap[cc] = c;
                        changed = true;
                    } else if (map[c] != cc) {
                        return false;
                    }
                }
            }
        }
        return true;
    };

    std::function<bool(std::size_t)> dfs = [&](std::size_t gi) -> bool {
        if (gi == gens.size()) {
            for (int i = 0; i < n; ++i)
                if (map[i] < 0) return false;
            return true;
        }
        int src = gens[gi];
        auto saved_map = map;
        auto saved_rmap = rmap;
        for (int tgt = 0; tgt < n; ++tgt) {
            if (rmap[tgt] >= 0 || oh[tgt] != og[src]) continue;
            map = saved_map;
            rmap = saved_rmap;
            if (map[src] >= 0) {
                if (map[src] == tgt && dfs(gi + 1)) return true;
                continue;
            }
            map[src] = tgt;
            rmap[tgt] = src;
            if (saturate() && dfs(gi + 1)) return true;
        }
        map = saved_map;
        rmap = saved_rmap;
        return false;
    };

    map[idg] = idh;
    rmap[idh] = idg;
    if (dfs(0)) return map;
    return std::nullopt;
}

} // namespace cfpo
