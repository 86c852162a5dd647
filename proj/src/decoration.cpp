#include "cfpo/decoration.hpp"

#include <algorithm>
#include <set>

namespace cfpo {

std::vector<std::string> DecoratedPoset::skeleton_elements() const {
    std::vector<std::string> out;
    for (auto& [e, pv] : provenance)
        if (pv.kind == Provenance::Kind::Skeleton) out.push_back(e);
    return out;
}

std::vector<std::string> DecoratedPoset::above_copy(const std::string& x) const {
    std::vector<std::string> out;
    for (auto& [e, pv] : provenance)
        if (pv.kind == Provenance::Kind::Above && pv.anchor == x) out.push_back(e);
    return out;
}

std::vector<std::string> DecoratedPoset::between_copy(const std::string& x,
                                                      const std::string& y) const {
    std::vector<std::string> out;
    for (auto& [e, pv] : provenance)
        if (pv.kind == Provenance::Kind::Between && pv.anchor == x && pv.anchor2 == y)
            out.push_back(e);
    return out;
}

DecoratedPoset decorate(const Poset& skeleton, const ChainedTree& above,
                        const ChainedTree& between) {
    if (!skeleton.is_cycle_free())
        throw InputError("decorate: skeleton is not cycle-free");
    if (auto v = validate_tree(above))
        throw InputError("decorate: above-tree invalid: " + v->message);
    if (auto v = validate_tree(between))
        throw InputError("decorate: between-tree invalid: " + v->message);
    if (!between.empty() && between.chain.empty())
        throw InputError("decorate: between-tree needs a distinguished chain");

    DecoratedPoset d;
    if (skeleton.empty()) {
        d.base = Poset::build({}, {}, RelationKind::Lt);
        return d;
    }

    std::vector<std::string> elems;
    std::vector<std::pair<std::string, std::string>> rel;
    std::set<std::string> taken;

    auto add_elem = [&](const std::string& name, Provenance pv) {
        if (!taken.insert(name).second)
            throw InputError("decorate: generated name '" + name + "' collides");
        elems.push_back(name);
        d.provenance[name] = std::move(pv);
    };

    for (const auto& x : skeleton.elements())
        add_elem(x, Provenance{Provenance::Kind::Skeleton, "", "", "", false});
    for (auto& [a, b] : skeleton.lt_pairs_named()) rel.emplace_back(a, b);

    if (!above.empty()) {
        for (const auto& x : skeleton.elements()) {
            for (const auto& s : above.base.elements())
                add_elem(x + "/" + s, Provenance{Provenance::Kind::Above, x, "", s, false});
            // within-copy order, and the whole copy above its anchor
            for (auto& [s, s2] : above.base.lt_pairs_named())
                rel.emplace_back(x + "/" + s, x + "/" + s2);
            for (const auto& s : above.base.elements())
                rel.emplace_back(x, x + "/" + s);
        }
    }

    if (!between.empty()) {
        std::set<std::string> on_chain(between.chain.begin(), between.chain.end());
        for (auto& [lo, hi] : skeleton.cover_pairs_named()) {
            std::string prefix = lo + ".." + hi + "/";
            for (const auto& t : between.base.elements())
                add_elem(prefix + t, Provenance{Provenance::Kind::Between, lo, hi, t,
                                                on_chain.count(t) > 0});
            for (auto& [t, t2] : between.base.lt_pairs_named())
                rel.emplace_back(prefix + t, prefix + t2);
            // chain elements sit strictly between the two anchors
            for (const auto& t : between.chain) {
                rel.emplace_back(lo, prefix + t);
                rel.emplace_back(prefix + t, hi);
            }
        }
    }

    d.base = Poset::build(std::move(elems), rel, RelationKind::Lt);
    if (!d.base.is_cycle_free())
        throw InputError("decorate: result is not cycle-free (invalid inputs)");
    return d;
}

Poset skeleton_of(const DecoratedPoset& d) {
    return d.base.induced(d.skeleton_elements());
}

JoinRichReport is_join_rich(const Poset& p) {
    JoinRichReport rep;
    const int n = static_cast<int>(p.size());
    for (int a = 0; a < n; ++a) {
        bool is_join = false;
        for (int b0 = 0; b0 < n && !is_join; ++b0) {
            if (!p.less(b0, a)) continue;
            for (int b1 = b0 + 1; b1 < n && !is_join; ++b1) {
                if (!p.less(b1, a) || p.comparable(b0, b1)) continue;
                // a is a common upper bound; least iff below every other one
                bool least = true;
                for (int c = 0; c < n && least; ++c)
                    if (c != a && p.less(b0, c) && p.less(b1, c) && !p.less(a, c))
                        least = false;
                if (least) is_join = true;
            }
        }
        if (!is_join) rep.non_join_points.push_back(p.name_of(a));
    }
    rep.join_rich = rep.non_join_points.empty() && n > 0;
    return rep;
}

} // namespace cfpo
