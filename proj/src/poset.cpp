#include "cfpo/poset.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace cfpo {

namespace {

// Finds a directed cycle in the raw input pairs (indices), for error reports.
std::vector<int> find_directed_cycle(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> out(n);
    for (auto& [a, b] : edges) out[a].push_back(b);
    std::vector<int> state(n, 0); // 0 unseen, 1 on stack, 2 done
    std::vector<int> stack;
    std::vector<int> cycle;

    auto dfs = [&](auto&& self, int v) -> bool {
        state[v] = 1;
        stack.push_back(v);
        for (int w : out[v]) {
            if (state[w] == 1) {
                auto it = std::find(stack.begin(), stack.end(), w);
                cycle.assign(it, stack.end());
                cycle.push_back(w);
                return true;
            }
            if (state[w] == 0 && self(self, w)) return true;
        }
        stack.pop_back();
        state[v] = 2;
        return false;
    };

    for (int v = 0; v < n; ++v)
        if (state[v] == 0 && dfs(dfs, v)) return cycle;
    return {};
}

} // namespace

Poset Poset::build(std::vector<std::string> elements,
                   const std::vector<std::pair<std::string, std::string>>& pairs,
                   RelationKind kind) {
    std::sort(elements.begin(), elements.end());
    if (std::adjacent_find(elements.begin(), elements.end()) != elements.end())
        throw InputError("duplicate element identifier");

    Poset p;
    p.names_ = std::move(elements);
    const int n = static_cast<int>(p.names_.size());
    p.lt_.assign(static_cast<std::size_t>(n) * n, 0);

    std::vector<std::pair<int, int>> edges;
    edges.reserve(pairs.size());
    for (auto& [a, b] : pairs) {
        int ia = p.index_of(a);
        int ib = p.index_of(b);
        if (ia < 0) throw InputError("relation mentions unknown element '" + a + "'");
        if (ib < 0) throw InputError("relation mentions unknown element '" + b + "'");
        if (ia == ib) throw InputError("reflexive pair (" + a + "," + a + ")");
        edges.emplace_back(ia, ib);
        p.lt_[p.idx(ia, ib)] = 1;
    }

    // Transitive closure; for kind=Lt this also completes a partial listing.
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            if (!p.lt_[p.idx(i, k)]) continue;
            for (int j = 0; j < n; ++j)
                if (p.lt_[p.idx(k, j)]) p.lt_[p.idx(i, j)] = 1;
        }

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if ((i == j && p.lt_[p.idx(i, i)]) ||
                (i < j && p.lt_[p.idx(i, j)] && p.lt_[p.idx(j, i)])) {
                auto cyc = find_directed_cycle(n, edges);
                std::string msg = "cycle in order relation:";
                for (int v : cyc) msg += " " + p.names_[v];
                throw InputError(msg);
            }
        }
    }
    (void)kind; // both kinds reduce to: close, validate, derive covers
    p.derive();
    return p;
}

void Poset::derive() {
    const int n = static_cast<int>(names_.size());
    covers_.clear();
    adj_.assign(n, {});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!lt_[idx(i, j)]) continue;
            bool cover = true;
            for (int k = 0; k < n && cover; ++k)
                if (lt_[idx(i, k)] && lt_[idx(k, j)]) cover = false;
            if (cover) {
                covers_.emplace_back(i, j);
                adj_[i].push_back(j);
                adj_[j].push_back(i);
            }
        }
    for (auto& v : adj_) std::sort(v.begin(), v.end());

    // Cycle-freeness: grow a spanning forest; a cover edge landing inside an
    // existing tree closes an undirected cycle, recovered via tree paths.
    cycle_.clear();
    std::vector<int> comp(n, -1);
    std::vector<int> parent(n, -1);
    int nc = 0;
    for (int root = 0; root < n; ++root) {
        if (comp[root] >= 0) continue;
        comp[root] = nc;
        std::queue<int> q;
        q.push(root);
        while (!q.empty() && cycle_.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj_[v]) {
                if (w == parent[v]) continue;
                if (comp[w] < 0) {
                    comp[w] = nc;
                    parent[w] = v;
                    q.push(w);
                } else {
                    // walk both ends up to their meeting point
                    std::vector<int> va{v}, vb{w};
                    std::set<int> seen(va.begin(), va.end());
                    for (int x = v; parent[x] >= 0;) {
                        x = parent[x];
                        va.push_back(x);
                        seen.insert(x);
                    }
                    for (int x = w; std::find(va.begin(), va.end(), x) == va.end();) {
                        x = parent[x];
                        vb.push_back(x);
                    }
                    int meet = vb.back();
                    cycle_.clear();
                    for (int x : va) {
                        cycle_.push_back(names_[x]);
                        if (x == meet) break;
                    }
                    for (auto it = vb.rbegin() + 1; it != vb.rend(); ++it)
                        cycle_.push_back(names_[*it]);
                    break;
                }
            }
        }
        if (!cycle_.empty()) break;
        ++nc;
    }
}

int Poset::index_of(const std::string& e) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), e);
    if (it == names_.end() || *it != e) return -1;
    return static_cast<int>(it - names_.begin());
}

bool Poset::less(const std::string& a, const std::string& b) const {
    int ia = index_of(a), ib = index_of(b);
    if (ia < 0 || ib < 0) throw InputError("unknown element in order query");
    return less(ia, ib);
}

std::vector<std::pair<std::string, std::string>> Poset::cover_pairs_named() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(covers_.size());
    for (auto& [i, j] : covers_) out.emplace_back(names_[i], names_[j]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<std::string, std::string>> Poset::lt_pairs_named() const {
    std::vector<std::pair<std::string, std::string>> out;
    const int n = static_cast<int>(names_.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (lt_[idx(i, j)]) out.emplace_back(names_[i], names_[j]);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t Poset::lt_count() const {
    std::size_t c = 0;
    for (unsigned char b : lt_) c += b;
    return c;
}

std::optional<std::vector<int>> Poset::path(int from, int to) const {
    if (!is_cycle_free()) throw InputError("path requires a cycle-free poset");
    const int n = static_cast<int>(names_.size());
    if (from < 0 || to < 0 || from >= n || to >= n) throw InputError("path endpoint out of range");
    std::vector<int> prev(n, -2);
    prev[from] = -1;
    std::queue<int> q;
    q.push(from);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (v == to) break;
        for (int w : adj_[v])
            if (prev[w] == -2) {
                prev[w] = v;
                q.push(w);
            }
    }
    if (prev[to] == -2) return std::nullopt;
    std::vector<int> nodes;
    for (int v = to; v != -1; v = prev[v]) nodes.push_back(v);
    std::reverse(nodes.begin(), nodes.end());
    return nodes;
}

std::optional<std::vector<std::string>> Poset::path(const std::string& from,
                                                    const std::string& to) const {
    int ia = index_of(from), ib = index_of(to);
    if (ia < 0 || ib < 0) throw InputError("unknown path endpoint");
    auto p = path(ia, ib);
    if (!p) return std::nullopt;
    std::vector<std::string> out;
    out.reserve(p->size());
    for (int v : *p) out.push_back(names_[v]);
    return out;
}

std::vector<int> Poset::to_indices(const std::vector<std::string>& subset,
                                   const char* what) const {
    std::vector<int> out;
    out.reserve(subset.size());
    for (auto& e : subset) {
        int i = index_of(e);
        if (i < 0) throw InputError(std::string(what) + " mentions unknown element '" + e + "'");
        out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::vector<std::string>>
Poset::components_avoiding(const std::vector<std::string>& banned) const {
    const int n = static_cast<int>(names_.size());
    std::vector<char> is_banned(n, 0);
    for (int i : to_indices(banned, "banned set")) is_banned[i] = 1;

    std::vector<int> cls(n, -1);
    std::vector<std::vector<std::string>> out;
    for (int s = 0; s < n; ++s) {
        if (is_banned[s] || cls[s] >= 0) continue;
        std::vector<std::string> members;
        std::queue<int> q;
        q.push(s);
        cls[s] = static_cast<int>(out.size());
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            members.push_back(names_[v]);
            for (int w : adj_[v])
                if (!is_banned[w] && cls[w] < 0) {
                    cls[w] = cls[s];
                    q.push(w);
                }
        }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> Poset::boundary(const std::vector<std::string>& block) const {
    if (!is_cycle_free()) throw InputError("boundary requires a cycle-free poset");
    const int n = static_cast<int>(names_.size());
    auto c_idx = to_indices(block, "boundary block");
    std::vector<char> in_c(n, 0);
    for (int i : c_idx) in_c[i] = 1;

    // candidate gates: start with everything outside C, intersect with each path
    std::vector<char> gate(n, 0);
    bool first = true;
    for (int c : c_idx) {
        for (int m = 0; m < n; ++m) {
            if (in_c[m]) continue;
            auto p = path(c, m);
            if (!p) continue;
            std::vector<char> on(n, 0);
            for (int v : *p) on[v] = 1;
            if (first) {
                for (int v = 0; v < n; ++v) gate[v] = on[v] && !in_c[v];
                first = false;
            } else {
                for (int v = 0; v < n; ++v) gate[v] = gate[v] && on[v];
            }
        }
    }
    std::vector<std::string> out;
    if (first) return out; // no outside element reachable
    for (int v = 0; v < n; ++v)
        if (gate[v]) out.push_back(names_[v]);
    return out;
}

Poset Poset::induced(const std::vector<std::string>& subset) const {
    auto ids = to_indices(subset, "induced subset");
    std::vector<std::string> elems;
    elems.reserve(ids.size());
    for (int i : ids) elems.push_back(names_[i]);
    std::vector<std::pair<std::string, std::string>> rel;
    for (int i : ids)
        for (int j : ids)
            if (less(i, j)) rel.emplace_back(names_[i], names_[j]);
    return build(std::move(elems), rel, RelationKind::Lt);
}

std::vector<int> Poset::heights() const {
    const int n = static_cast<int>(names_.size());
    std::vector<int> h(n, 0);
    // lt is acyclic, so iterate until fixpoint (n is small throughout)
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [i, j] : covers_)
            if (h[j] < h[i] + 1) {
                h[j] = h[i] + 1;
                changed = true;
            }
    }
    return h;
}

std::vector<std::pair<std::string, std::string>> adjacent_pairs(const Poset& p) {
    return p.cover_pairs_named();
}

} // namespace cfpo
