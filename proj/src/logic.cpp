#include "cfpo/logic.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <functional>
#include <unordered_map>

namespace cfpo {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Formula (de)serialization

namespace {

Formula::TupleTerm term_from_json(const json& j) {
    Formula::TupleTerm t;
    if (j.is_string()) {
        t.var = j.get<std::string>();
    } else {
        t.var = j.at("var").get<std::string>();
        if (j.contains("conj")) t.conj_by = j.at("conj").get<std::string>();
    }
    return t;
}

json term_to_json(const Formula::TupleTerm& t) {
    if (t.conj_by.empty()) return t.var;
    return json{{"var", t.var}, {"conj", t.conj_by}};
}

} // namespace

Formula Formula::from_json(const json& j) {
    Formula f;
    auto op = j.at("op").get<std::string>();
    auto kids_of = [&](const char* key) {
        std::vector<Formula> kids;
        for (const auto& k : j.at(key)) kids.push_back(from_json(k));
        return kids;
    };
    if (op == "true") {
        f.op = Op::True;
    } else if (op == "and" || op == "or" || op == "implies") {
        f.op = op == "and" ? Op::And : (op == "or" ? Op::Or : Op::Implies);
        f.kids = kids_of("kids");
        if (f.op == Op::Implies && f.kids.size() != 2)
            throw InputError("implies needs two children");
    } else if (op == "not") {
        f.op = Op::Not;
        f.kids.push_back(from_json(j.at("body")));
    } else if (op == "forall_elem" || op == "exists_elem" || op == "forall_tuple" ||
               op == "exists_tuple" || op == "forall_subgroup" || op == "exists_subgroup") {
        f.op = op == "forall_elem"      ? Op::ForallElem
               : op == "exists_elem"    ? Op::ExistsElem
               : op == "forall_tuple"   ? Op::ForallTuple
               : op == "exists_tuple"   ? Op::ExistsTuple
               : op == "forall_subgroup" ? Op::ForallSubgroup
                                         : Op::ExistsSubgroup;
        f.var = j.at("var").get<std::string>();
        f.kids.push_back(from_json(j.at("body")));
    } else if (op == "atom") {
        f.op = Op::Atom;
        f.pred = j.at("pred").get<std::string>();
        if (j.contains("args"))
            for (const auto& a : j.at("args")) f.args.push_back(term_from_json(a));
        if (j.contains("elem")) f.elem = j.at("elem").get<std::string>();
    } else if (op == "eq") {
        f.op = Op::EqTuple;
        for (const auto& a : j.at("args")) f.args.push_back(term_from_json(a));
        if (f.args.size() != 2) throw InputError("eq needs two tuple terms");
    } else if (op == "subgroup_atom") {
        f.op = Op::SubgroupAtom;
        f.pred = j.at("pred").get<std::string>();
        f.sub_args = j.at("sub_args").get<std::vector<std::string>>();
        if (j.contains("elem")) f.elem = j.at("elem").get<std::string>();
    } else {
        throw InputError("unknown formula op '" + op + "'");
    }
    return f;
}

json Formula::to_json() const {
    json j;
    switch (op) {
    case Op::True: j["op"] = "true"; break;
    case Op::And:
    case Op::Or:
    case Op::Implies: {
        j["op"] = op == Op::And ? "and" : (op == Op::Or ? "or" : "implies");
        json kids_j = json::array();
        for (const auto& k : kids) kids_j.push_back(k.to_json());
        j["kids"] = kids_j;
        break;
    }
    case Op::Not:
        j["op"] = "not";
        j["body"] = kids[0].to_json();
        break;
    case Op::ForallElem:
    case Op::ExistsElem:
    case Op::ForallTuple:
    case Op::ExistsTuple:
    case Op::ForallSubgroup:
    case Op::ExistsSubgroup:
        j["op"] = op == Op::ForallElem      ? "forall_elem"
                  : op == Op::ExistsElem    ? "exists_elem"
                  : op == Op::ForallTuple   ? "forall_tuple"
                  : op == Op::ExistsTuple   ? "exists_tuple"
                  : op == Op::ForallSubgroup ? "forall_subgroup"
                                             : "exists_subgroup";
        j["var"] = var;
        j["body"] = kids[0].to_json();
        break;
    case Op::Atom: {
        j["op"] = "atom";
        j["pred"] = pred;
        if (!args.empty()) {
            json a = json::array();
            for (const auto& t : args) a.push_back(term_to_json(t));
            j["args"] = a;
        }
        if (!elem.empty()) j["elem"] = elem;
        break;
    }
    case Op::EqTuple: {
        j["op"] = "eq";
        json a = json::array();
        for (const auto& t : args) a.push_back(term_to_json(t));
        j["args"] = a;
        break;
    }
    case Op::SubgroupAtom:
        j["op"] = "subgroup_atom";
        j["pred"] = pred;
        j["sub_args"] = sub_args;
        if (!elem.empty()) j["elem"] = elem;
        break;
    }
    return j;
}

namespace {

Formula atom(std::string pred, std::vector<std::string> args, std::string elem = "") {
    Formula f;
    f.op = Formula::Op::Atom;
    f.pred = std::move(pred);
    for (auto& a : args) f.args.push_back({a, ""});
    f.elem = std::move(elem);
    return f;
}

Formula neg(Formula f) {
    Formula g;
    g.op = Formula::Op::Not;
    g.kids.push_back(std::move(f));
    return g;
}

Formula conj(std::vector<Formula> kids) {
    Formula g;
    g.op = Formula::Op::And;
    g.kids = std::move(kids);
    return g;
}

Formula exists_tuple(std::string var, Formula body) {
    Formula g;
    g.op = Formula::Op::ExistsTuple;
    g.var = std::move(var);
    g.kids.push_back(std::move(body));
    return g;
}

Formula meets_x_formula(const std::string& f) {
    // Indec(f) and some g overlaps f without nesting or sharing its locale
    return conj({atom("Indec", {f}),
                 exists_tuple("g#w", conj({neg(atom("Disj", {f, "g#w"})),
                                           neg(atom("SamePD", {f, "g#w"})),
                                           neg(atom("Sqsubset", {f, "g#w"})),
                                           neg(atom("Sqsubset", {"g#w", f}))}))});
}

} // namespace

Formula Formula::builtin(const std::string& name) {
    if (name == "MeetsX") return meets_x_formula("f");
    if (name == "RepPointDec")
        return conj({atom("Disj", {"f0", "f1"}), meets_x_formula("f0"), meets_x_formula("f1"),
                     atom("SamePD", {"f0", "f1"})});
    if (name == "FunctionPart") return atom("FunctionPartMember", {}, "phi");
    if (name == "AboveWitness") return atom("AboveWitness", {"f0", "f1"}, "phi");
    if (name == "BetweenWitness")
        return atom("BetweenWitness", {"f0", "f1", "g0", "g1"}, "phi");
    throw InputError("unknown built-in formula '" + name +
                     "' (Above/Between run through classify_subgroups)");
}

// ---------------------------------------------------------------------------
// betweenness helpers

std::set<std::tuple<int, int, int>> path_betweenness(const Poset& p) {
    std::set<std::tuple<int, int, int>> b;
    const int n = static_cast<int>(p.size());
    for (int x = 0; x < n; ++x)
        for (int z = 0; z < n; ++z) {
            auto pa = p.path(x, z);
            if (!pa) continue;
            for (int y : *pa) b.insert({y, x, z});
        }
    return b;
}

bool betweenness_isomorphic(const std::vector<std::string>& dom_a,
                            const std::set<std::tuple<int, int, int>>& b_a,
                            const std::vector<std::string>& dom_b,
                            const std::set<std::tuple<int, int, int>>& b_b) {
    if (dom_a.size() != dom_b.size()) return false;
    if (b_a.size() != b_b.size()) return false;
    const int n = static_cast<int>(dom_a.size());
    std::vector<int> img(n, -1);
    std::vector<char> used(n, 0);
    std::function<bool(int)> dfs = [&](int v) -> bool {
        if (v == n) return true;
        for (int w = 0; w < n; ++w) {
            if (used[w]) continue;
            img[v] = w;
            used[w] = 1;
            bool ok = true;
            for (const auto& [y, x, z] : b_a) {
                if (y > v || x > v || z > v) continue;
                if (!b_b.count({img[y], img[x], img[z]})) {
                    ok = false;
                    break;
                }
            }
            // surjectivity onto b_b follows from |b_a| == |b_b|
            if (ok && dfs(v + 1)) return true;
            used[w] = 0;
            img[v] = -1;
        }
        return false;
    };
    return dfs(0);
}

std::optional<int> SkeletonInterpretation::point_by_yield(const std::string& y) const {
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i].yield == y) return static_cast<int>(i);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// ActionStructure internals

struct ActionStructure::Impl {
    int n = 0;  // decorated poset size (<= 64)
    int gn = 0; // group order
    int arity = 2;
    std::uint64_t quantifier_budget = 0;

    std::vector<std::uint64_t> elem_supp; // per group element
    std::vector<std::uint64_t> path_mask; // n*n, includes endpoints, 0 = no path
    std::vector<int> mul, inv;            // group tables
    std::vector<char> in_skeleton;        // per dec element
    std::vector<int> anchor_of;           // bundle anchor (lower for between), -1
    std::vector<char> skel_adjacent;      // n*n, symmetric skeleton cover pairs

    // yield locale per dec element: skeleton/above collapse onto the anchor
    // point, between-copies keep their anchor pair
    std::vector<int> locale_of;
    std::vector<std::string> locale_desc;

    std::uint64_t tuple_count = 0;
    struct TupleRec {
        std::uint64_t supp = 0;
        int pd = -1;
    };
    mutable std::vector<TupleRec> tuple_cache;
    mutable bool cache_built = false;
    mutable std::vector<signed char> meets_cache;
    mutable std::vector<char> function_part_members; // by group index
    mutable bool function_part_built = false;

    int at(int a, int b) const { return mul[static_cast<std::size_t>(a) * gn + b]; }

    std::uint64_t pow_count() const {
        std::uint64_t c = 1;
        for (int i = 0; i < arity; ++i) {
            if (c > UINT64_MAX / static_cast<std::uint64_t>(gn)) return UINT64_MAX;
            c *= static_cast<std::uint64_t>(gn);
        }
        return c;
    }

    std::vector<int> decode(std::uint64_t index) const {
        std::vector<int> t(arity);
        for (int i = 0; i < arity; ++i) {
            t[i] = static_cast<int>(index % gn);
            index /= gn;
        }
        return t;
    }

    std::uint64_t encode(const std::vector<int>& t) const {
        std::uint64_t index = 0;
        for (int i = arity - 1; i >= 0; --i) index = index * gn + t[i];
        return index;
    }

    std::uint64_t supp_of(const std::vector<int>& t) const {
        std::uint64_t m = 0;
        for (int g : t) m |= elem_supp[g];
        return m;
    }

    int pd_of_mask(std::uint64_t supp) const {
        if (supp == 0) return -1;
        std::uint64_t u = 0;
        std::vector<int> pts;
        for (int i = 0; i < n; ++i)
            if (supp >> i & 1) pts.push_back(i);
        for (std::size_t a = 0; a < pts.size(); ++a)
            for (std::size_t b = a + 1; b < pts.size(); ++b)
                u |= path_mask[static_cast<std::size_t>(pts[a]) * n + pts[b]];
        std::uint64_t rest = u & ~supp;
        if (std::popcount(rest) != 1) return -1;
        return std::countr_zero(rest);
    }

    const TupleRec& record(std::uint64_t index) const {
        build_cache();
        return tuple_cache[index];
    }

    void build_cache() const {
        if (cache_built) return;
        if (tuple_count > quantifier_budget)
            throw BudgetError("tuple space |G|^arity exceeds the quantifier budget");
        std::unordered_map<std::uint64_t, int> pd_by_mask;
        tuple_cache.resize(tuple_count);
        for (std::uint64_t i = 0; i < tuple_count; ++i) {
            auto t = decode(i);
            std::uint64_t m = supp_of(t);
            auto it = pd_by_mask.find(m);
            if (it == pd_by_mask.end()) it = pd_by_mask.emplace(m, pd_of_mask(m)).first;
            tuple_cache[i] = {m, it->second};
        }
        meets_cache.assign(tuple_count, -1);
        cache_built = true;
    }
};

namespace {

std::string yield_desc_for(const DecoratedPoset& dec, const std::string& point) {
    const Provenance& pv = dec.provenance.at(point);
    switch (pv.kind) {
    case Provenance::Kind::Skeleton: return "pt:" + point;
    case Provenance::Kind::Above: return "pt:" + pv.anchor;
    case Provenance::Kind::Between: return "pair:" + pv.anchor + "," + pv.anchor2;
    }
    return "";
}

} // namespace

ActionStructure::ActionStructure(DecoratedPoset dec, std::optional<PermGroup> group,
                                 LogicLimits limits)
    : dec_(std::move(dec)), limits_(limits) {
    if (dec_.base.size() > 64)
        throw BudgetError("logic module handles at most 64 elements");
    if (!dec_.base.is_cycle_free())
        throw InputError("action structure requires a cycle-free poset");

    group_ = group ? std::move(*group)
                   : automorphism_group(dec_.base, {}, {}, limits_.search);
    if (group_.domain() != dec_.base.elements())
        throw InputError("group domain does not match the decorated poset");
    for (const auto& g : group_.elements())
        for (auto& [i, j] : dec_.base.cover_pairs())
            if (!dec_.base.less(g(i), g(j)))
                throw InputError("group element does not preserve the order");

    skeleton_ = dec_.skeleton_elements();

    impl_ = std::make_shared<Impl>();
    Impl& im = *impl_;
    im.n = static_cast<int>(dec_.base.size());
    im.gn = static_cast<int>(group_.order());
    im.arity = limits_.tuple_arity;
    if (im.arity < 1) throw InputError("tuple arity must be at least 1");
    im.quantifier_budget = limits_.quantifier_budget;

    im.elem_supp.resize(im.gn);
    for (int g = 0; g < im.gn; ++g) {
        std::uint64_t m = 0;
        const Perm& p = group_.elements()[g];
        for (int i = 0; i < im.n; ++i)
            if (p(i) != i) m |= std::uint64_t{1} << i;
        im.elem_supp[g] = m;
    }

    im.path_mask.assign(static_cast<std::size_t>(im.n) * im.n, 0);
    for (int i = 0; i < im.n; ++i)
        for (int j = 0; j < im.n; ++j) {
            auto pa = dec_.base.path(i, j);
            if (!pa) continue;
            std::uint64_t m = 0;
            for (int v : *pa) m |= std::uint64_t{1} << v;
            im.path_mask[static_cast<std::size_t>(i) * im.n + j] = m;
        }

    im.mul.resize(static_cast<std::size_t>(im.gn) * im.gn);
    im.inv.resize(im.gn);
    for (int a = 0; a < im.gn; ++a) {
        for (int b = 0; b < im.gn; ++b) {
            int c = group_.element_index(compose(group_.elements()[a], group_.elements()[b]));
            if (c < 0) throw InputError("group is not closed under composition");
            im.mul[static_cast<std::size_t>(a) * im.gn + b] = c;
        }
        im.inv[a] = group_.element_index(inverse(group_.elements()[a]));
    }

    im.in_skeleton.assign(im.n, 0);
    for (const auto& e : skeleton_) im.in_skeleton[dec_.base.index_of(e)] = 1;

    im.anchor_of.assign(im.n, -1);
    for (int i = 0; i < im.n; ++i) {
        const Provenance& pv = dec_.provenance.at(dec_.base.name_of(i));
        if (pv.kind != Provenance::Kind::Skeleton)
            im.anchor_of[i] = dec_.base.index_of(pv.anchor);
    }

    im.skel_adjacent.assign(static_cast<std::size_t>(im.n) * im.n, 0);
    if (!skeleton_.empty()) {
        Poset sub = dec_.base.induced(skeleton_);
        for (auto& [a, b] : sub.cover_pairs_named()) {
            int ia = dec_.base.index_of(a), ib = dec_.base.index_of(b);
            im.skel_adjacent[static_cast<std::size_t>(ia) * im.n + ib] = 1;
            im.skel_adjacent[static_cast<std::size_t>(ib) * im.n + ia] = 1;
        }
    }

    std::map<std::string, int> interned;
    im.locale_of.resize(im.n);
    for (int i = 0; i < im.n; ++i) {
        std::string y = yield_desc_for(dec_, dec_.base.name_of(i));
        auto it = interned.find(y);
        if (it == interned.end()) {
            it = interned.emplace(y, static_cast<int>(im.locale_desc.size())).first;
            im.locale_desc.push_back(y);
        }
        im.locale_of[i] = it->second;
    }

    im.tuple_count = im.pow_count();
}

namespace {

std::vector<int> tuple_to_indices(const PermGroup& g, const std::vector<Perm>& tuple,
                                  int arity) {
    if (static_cast<int>(tuple.size()) != arity)
        throw InputError("tuple arity mismatch (expected " + std::to_string(arity) + ")");
    std::vector<int> out;
    for (const auto& p : tuple) {
        int i = g.element_index(p);
        if (i < 0) throw InputError("tuple member is not an element of the group");
        out.push_back(i);
    }
    return out;
}

} // namespace

std::vector<std::string> ActionStructure::support(const std::vector<Perm>& tuple) const {
    std::uint64_t m = 0;
    for (const auto& p : tuple) {
        if (p.degree() != static_cast<int>(dec_.base.size()))
            throw InputError("tuple member degree mismatch");
        for (int i = 0; i < p.degree(); ++i)
            if (p(i) != i) m |= std::uint64_t{1} << i;
    }
    std::vector<std::string> out;
    for (int i = 0; i < impl_->n; ++i)
        if (m >> i & 1) out.push_back(dec_.base.name_of(i));
    return out;
}

std::optional<std::string> ActionStructure::indec_point(const std::vector<Perm>& tuple) const {
    auto idx = tuple_to_indices(group_, tuple, static_cast<int>(tuple.size()));
    std::uint64_t m = 0;
    for (int g : idx) m |= impl_->elem_supp[g];
    int pd = impl_->pd_of_mask(m);
    if (pd < 0) return std::nullopt;
    return dec_.base.name_of(pd);
}

// internal atom layer ------------------------------------------------------

namespace {

struct Evaluator {
    const ActionStructure& as;
    ActionStructure::Impl& im;
    const DecoratedPoset& dec;
    const PermGroup& group;

    // each quantifier sweep must fit the budget on its own
    void charge(std::uint64_t domain_size, const std::string& var) const {
        if (domain_size > im.quantifier_budget)
            throw BudgetError("quantifier domain for '" + var + "' exceeds the budget (" +
                              std::to_string(domain_size) + ")");
    }

    bool same_pd(std::uint64_t ti, std::uint64_t tj) const {
        int p0 = im.record(ti).pd, p1 = im.record(tj).pd;
        if (p0 < 0 || p1 < 0) return false;
        if (p0 == p1) return true;
        // one gate a skeleton point, the other inside a bundle anchored
        // there (above, or between with it as the lower anchor)
        auto related = [&](int x, int t) { return im.in_skeleton[x] && im.anchor_of[t] == x; };
        return related(p0, p1) || related(p1, p0);
    }

    bool meets(std::uint64_t ti) const {
        im.build_cache();
        signed char& memo = im.meets_cache[ti];
        if (memo >= 0) return memo == 1;
        bool result = false;
        if (im.record(ti).pd >= 0) {
            std::uint64_t fs = im.record(ti).supp;
            charge(im.tuple_count, "g (MeetsX witness)");
            for (std::uint64_t gi = 0; gi < im.tuple_count && !result; ++gi) {
                std::uint64_t gs = im.record(gi).supp;
                if ((fs & gs) == 0) continue;                       // Disj
                if (fs != gs && (fs & ~gs) == 0) continue;          // f < g
                if (fs != gs && (gs & ~fs) == 0) continue;          // g < f
                if (same_pd(ti, gi)) continue;
                result = true;
            }
        }
        memo = result ? 1 : 0;
        return result;
    }

    bool rep_point(std::uint64_t t0, std::uint64_t t1) const {
        if ((im.record(t0).supp & im.record(t1).supp) != 0) return false;
        if (!meets(t0) || !meets(t1)) return false;
        return same_pd(t0, t1);
    }

    // pair (t0,t1) represents a skeleton point: both meet X with equal gate
    std::optional<int> rep_pair_point(std::uint64_t t0, std::uint64_t t1) const {
        if (!rep_point(t0, t1)) return std::nullopt;
        return im.record(t0).pd;
    }

    std::set<int> skeleton_fixed_set(int phi) const {
        std::set<int> fixed;
        const Perm& p = group.elements()[phi];
        for (int i = 0; i < im.n; ++i)
            if (im.in_skeleton[i] && p(i) == i) fixed.insert(i);
        return fixed;
    }

    bool adjacent_in_skeleton(int x, int y) const {
        return im.skel_adjacent[static_cast<std::size_t>(x) * im.n + y] != 0;
    }
};

} // namespace

PrimitivePreds ActionStructure::primitive_preds(const std::vector<Perm>& t0,
                                                const std::vector<Perm>& t1) const {
    Impl& im = *impl_;
    auto i0 = tuple_to_indices(group_, t0, im.arity);
    auto i1 = tuple_to_indices(group_, t1, im.arity);
    Evaluator ev{*this, im, dec_, group_};
    std::uint64_t u0 = im.encode(i0), u1 = im.encode(i1);
    std::uint64_t s0 = im.record(u0).supp, s1 = im.record(u1).supp;
    PrimitivePreds out;
    out.disjoint = (s0 & s1) == 0;
    out.support_subset = s0 != s1 && (s0 & ~s1) == 0;
    out.same_locale = ev.same_pd(u0, u1);
    return out;
}

bool ActionStructure::meets_skeleton(const std::vector<Perm>& tuple) const {
    std::map<std::string, std::vector<Perm>> env{{"f", tuple}};
    return eval(Formula::builtin("MeetsX"), env, {});
}

std::optional<std::string>
ActionStructure::representation_point(const std::vector<Perm>& t0,
                                      const std::vector<Perm>& t1) const {
    std::map<std::string, std::vector<Perm>> env{{"f0", t0}, {"f1", t1}};
    if (!eval(Formula::builtin("RepPointDec"), env, {})) return std::nullopt;
    auto pd = indec_point(t0);
    assert(pd);
    return pd;
}

SkeletonInterpretation ActionStructure::extract_skeleton() const {
    Impl& im = *impl_;
    im.build_cache();

    // locale id -> realized gate points
    std::map<int, std::set<int>> classes;
    for (std::uint64_t i = 0; i < im.tuple_count; ++i) {
        int pd = im.tuple_cache[i].pd;
        if (pd >= 0) classes[im.locale_of[pd]].insert(pd);
    }
    if (classes.empty())
        throw InputError("no representable points: the group is degenerate");

    // a between class whose anchors are both independently represented is
    // redundant and folds into its lower anchor; otherwise it stands in for
    // the unrepresented surroundings
    std::map<std::string, std::set<int>> merged;
    std::set<std::string> point_yields;
    for (auto& [loc, pts] : classes) {
        const std::string& desc = im.locale_desc[loc];
        if (desc.rfind("pt:", 0) == 0) point_yields.insert(desc.substr(3));
    }
    for (auto& [loc, pts] : classes) {
        std::string desc = im.locale_desc[loc];
        if (desc.rfind("pair:", 0) == 0) {
            auto comma = desc.find(',');
            std::string lo = desc.substr(5, comma - 5);
            std::string hi = desc.substr(comma + 1);
            if (point_yields.count(lo) && point_yields.count(hi)) desc = "pt:" + lo;
        }
        merged[desc].insert(pts.begin(), pts.end());
    }

    SkeletonInterpretation out;
    std::vector<std::pair<std::string, std::set<int>>> ordered(merged.begin(), merged.end());
    // betweenness runs over the yielded skeleton element itself; a pair
    // class keeps its realized gates as stand-ins
    std::vector<std::set<int>> reps(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        SkeletonInterpretation::Point p;
        p.id = "p" + std::to_string(i);
        p.yield = ordered[i].first;
        for (int v : ordered[i].second) p.rep_points.push_back(dec_.base.name_of(v));
        if (p.yield.rfind("pt:", 0) == 0)
            reps[i] = {dec_.base.index_of(p.yield.substr(3))};
        else
            reps[i] = ordered[i].second;
        out.points.push_back(std::move(p));
    }

    const int k = static_cast<int>(ordered.size());
    for (int y = 0; y < k; ++y)
        for (int x = 0; x < k; ++x)
            for (int z = 0; z < k; ++z) {
                bool hit = false;
                for (int px : reps[x])
                    for (int pz : reps[z]) {
                        std::uint64_t m =
                            im.path_mask[static_cast<std::size_t>(px) * im.n + pz];
                        for (int py : reps[y])
                            if (m >> py & 1) hit = true;
                    }
                if (hit) out.betweenness.insert({y, x, z});
            }
    return out;
}

PermGroup ActionStructure::function_part() const {
    Impl& im = *impl_;
    if (!im.function_part_built) {
        im.build_cache();
        std::set<int> realized;
        for (std::uint64_t i = 0; i < im.tuple_count; ++i)
            if (im.tuple_cache[i].pd >= 0) realized.insert(im.tuple_cache[i].pd);

        im.function_part_members.assign(im.gn, 1);
        for (int g = 0; g < im.gn; ++g) {
            const Perm& p = group_.elements()[g];
            for (int pt : realized)
                if (im.locale_of[p(pt)] != im.locale_of[pt]) {
                    im.function_part_members[g] = 0;
                    break;
                }
        }
        im.function_part_built = true;
    }
    std::vector<Perm> members;
    for (int g = 0; g < im.gn; ++g)
        if (im.function_part_members[g]) members.push_back(group_.elements()[g]);
    return PermGroup::from_elements(group_.domain(), std::move(members));
}

std::vector<Perm> ActionStructure::fixed_point_witnesses(const std::string& f,
                                                         const std::optional<std::string>& g) const {
    Impl& im = *impl_;
    int fi = dec_.base.index_of(f);
    if (fi < 0 || !im.in_skeleton[fi])
        throw InputError("witness point '" + f + "' is not a skeleton element");
    std::set<int> target{fi};
    Evaluator ev{*this, im, dec_, group_};
    if (g) {
        int gi = dec_.base.index_of(*g);
        if (gi < 0 || !im.in_skeleton[gi])
            throw InputError("witness point '" + *g + "' is not a skeleton element");
        if (!ev.adjacent_in_skeleton(fi, gi))
            throw InputError("(" + f + "," + *g + ") is not an adjacent pair of the skeleton");
        target.insert(gi);
    }
    std::vector<Perm> out;
    for (int e = 0; e < im.gn; ++e)
        if (ev.skeleton_fixed_set(e) == target) out.push_back(group_.elements()[e]);
    return out;
}

// ---------------------------------------------------------------------------
// second-order classification

namespace {

using Subgroup = std::vector<int>; // sorted group element indices

Subgroup conj_subgroup(const ActionStructure::Impl& im, const Subgroup& a, int phi) {
    Subgroup out;
    out.reserve(a.size());
    int pinv = im.inv[phi];
    for (int x : a) out.push_back(im.at(im.at(pinv, x), phi));
    std::sort(out.begin(), out.end());
    return out;
}

Subgroup product_set(const ActionStructure::Impl& im, const Subgroup& a, const Subgroup& b) {
    std::set<int> prod;
    for (int x : a)
        for (int y : b) prod.insert(im.at(x, y));
    return Subgroup(prod.begin(), prod.end());
}

bool subset_of(const Subgroup& a, const Subgroup& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // namespace

ClassifyResult ActionStructure::classify_subgroups(ClassifyMode mode, const std::string& f,
                                                   const std::optional<std::string>& g) const {
    if (mode == ClassifyMode::Between && !g)
        throw InputError("between mode needs two skeleton points");
    if (mode == ClassifyMode::Above && g)
        throw InputError("above mode takes a single skeleton point");

    Impl& im = *impl_;
    ClassifyResult result;
    auto witnesses = fixed_point_witnesses(f, mode == ClassifyMode::Between ? g : std::nullopt);
    if (witnesses.empty()) {
        result.diagnostic = "no witness fixes exactly the requested point(s) inside the "
                            "skeleton; classification is degenerate";
        return result;
    }
    std::vector<int> witness_ids;
    for (const auto& w : witnesses) witness_ids.push_back(group_.element_index(w));

    PermGroup fpart = function_part();
    auto subs = all_subgroups(fpart, limits_.search);
    Subgroup full;
    for (const auto& e : fpart.elements()) full.push_back(group_.element_index(e));
    std::sort(full.begin(), full.end());

    std::vector<Subgroup> as_sets;
    for (const auto& s : subs) {
        Subgroup ids;
        for (const auto& e : s.elements()) ids.push_back(group_.element_index(e));
        std::sort(ids.begin(), ids.end());
        as_sets.push_back(std::move(ids));
    }

    // Temp1: nontrivial proper subgroups stable under conjugation by every witness
    std::vector<int> temp1;
    for (std::size_t i = 0; i < as_sets.size(); ++i) {
        const auto& a = as_sets[i];
        if (a.size() <= 1 || a.size() == full.size()) continue;
        bool stable = true;
        for (int w : witness_ids)
            if (conj_subgroup(im, a, w) != a) {
                stable = false;
                break;
            }
        if (stable) temp1.push_back(static_cast<int>(i));
    }

    // Temp2: not a product of two other Temp1 subgroups
    std::map<Subgroup, std::vector<std::pair<int, int>>> products;
    for (int bi : temp1)
        for (int ci : temp1) {
            auto prod = product_set(im, as_sets[bi], as_sets[ci]);
            auto& lst = products[prod];
            if (lst.size() < 4) lst.emplace_back(bi, ci);
        }
    std::vector<int> temp2;
    for (int ai : temp1) {
        auto it = products.find(as_sets[ai]);
        bool decomposable = false;
        if (it != products.end())
            for (auto& [bi, ci] : it->second)
                if (bi != ai && ci != ai) decomposable = true;
        if (!decomposable) temp2.push_back(ai);
    }

    // Temp3 / Between: no other Temp2 subgroup embeds into A by conjugation
    std::vector<int> temp3;
    for (int ai : temp2) {
        bool maximal = true;
        for (int bi : temp2) {
            if (bi == ai) continue;
            for (int phi = 0; phi < im.gn && maximal; ++phi)
                if (subset_of(conj_subgroup(im, as_sets[bi], phi), as_sets[ai])) maximal = false;
            if (!maximal) break;
        }
        if (maximal) temp3.push_back(ai);
    }

    std::vector<int> final_ids = temp3;
    if (mode == ClassifyMode::Above) {
        // drop subgroups properly inside some Between(A; f, g') subgroup
        Poset sub = dec_.base.induced(skeleton_);
        std::vector<std::string> partners;
        for (auto& [lo, hi] : sub.cover_pairs_named()) {
            if (lo == f) partners.push_back(hi);
            if (hi == f) partners.push_back(lo);
        }
        std::vector<Subgroup> between_sets;
        for (const auto& partner : partners) {
            auto br = classify_subgroups(ClassifyMode::Between, f, partner);
            for (const auto& bg : br.subgroups) {
                Subgroup ids;
                for (const auto& e : bg.elements()) ids.push_back(group_.element_index(e));
                std::sort(ids.begin(), ids.end());
                between_sets.push_back(std::move(ids));
            }
        }
        std::vector<int> kept;
        for (int ai : final_ids) {
            bool inside = false;
            for (const auto& b : between_sets)
                if (as_sets[ai] != b && subset_of(as_sets[ai], b)) inside = true;
            if (!inside) kept.push_back(ai);
        }
        final_ids = kept;
    }

    for (int ai : final_ids) result.subgroups.push_back(subs[ai]);
    return result;
}

// ---------------------------------------------------------------------------
// generic evaluation

bool ActionStructure::eval(const Formula& formula,
                           const std::map<std::string, std::vector<Perm>>& tuple_env,
                           const std::map<std::string, Perm>& elem_env) const {
    Impl& im = *impl_;
    Evaluator ev{*this, im, dec_, group_};

    std::map<std::string, std::uint64_t> tuples;
    for (auto& [k, v] : tuple_env) tuples[k] = im.encode(tuple_to_indices(group_, v, im.arity));
    std::map<std::string, int> elems;
    for (auto& [k, v] : elem_env) {
        int i = group_.element_index(v);
        if (i < 0) throw InputError("environment element is not in the group");
        elems[k] = i;
    }
    std::map<std::string, int> subgroup_vars;

    // lazily enumerated subgroups of the function part
    std::vector<Subgroup> subgroup_domain;
    bool subgroups_ready = false;
    auto ensure_subgroups = [&]() {
        if (subgroups_ready) return;
        auto fp = function_part();
        for (const auto& s : all_subgroups(fp, limits_.search)) {
            Subgroup ids;
            for (const auto& e : s.elements()) ids.push_back(group_.element_index(e));
            std::sort(ids.begin(), ids.end());
            subgroup_domain.push_back(std::move(ids));
        }
        subgroups_ready = true;
    };

    auto resolve_tuple = [&](const Formula::TupleTerm& t) -> std::uint64_t {
        auto it = tuples.find(t.var);
        if (it == tuples.end()) throw InputError("unbound tuple variable '" + t.var + "'");
        std::uint64_t index = it->second;
        if (!t.conj_by.empty()) {
            auto ei = elems.find(t.conj_by);
            if (ei == elems.end())
                throw InputError("unbound element variable '" + t.conj_by + "'");
            auto members = im.decode(index);
            int pinv = im.inv[ei->second];
            for (int& m : members) m = im.at(im.at(pinv, m), ei->second);
            index = im.encode(members);
        }
        return index;
    };

    std::function<bool(const Formula&)> run = [&](const Formula& f) -> bool {
        switch (f.op) {
        case Formula::Op::True: return true;
        case Formula::Op::And:
            for (const auto& k : f.kids)
                if (!run(k)) return false;
            return true;
        case Formula::Op::Or:
            for (const auto& k : f.kids)
                if (run(k)) return true;
            return false;
        case Formula::Op::Not: return !run(f.kids[0]);
        case Formula::Op::Implies: return !run(f.kids[0]) || run(f.kids[1]);
        case Formula::Op::ForallElem:
        case Formula::Op::ExistsElem: {
            bool forall = f.op == Formula::Op::ForallElem;
            ev.charge(im.gn, f.var);
            for (int e = 0; e < im.gn; ++e) {
                elems[f.var] = e;
                bool v = run(f.kids[0]);
                if (forall && !v) {
                    elems.erase(f.var);
                    return false;
                }
                if (!forall && v) {
                    elems.erase(f.var);
                    return true;
                }
            }
            elems.erase(f.var);
            return forall;
        }
        case Formula::Op::ForallTuple:
        case Formula::Op::ExistsTuple: {
            bool forall = f.op == Formula::Op::ForallTuple;
            ev.charge(im.tuple_count, f.var);
            for (std::uint64_t t = 0; t < im.tuple_count; ++t) {
                tuples[f.var] = t;
                bool v = run(f.kids[0]);
                if (forall && !v) {
                    tuples.erase(f.var);
                    return false;
                }
                if (!forall && v) {
                    tuples.erase(f.var);
                    return true;
                }
            }
            tuples.erase(f.var);
            return forall;
        }
        case Formula::Op::ForallSubgroup:
        case Formula::Op::ExistsSubgroup: {
            ensure_subgroups();
            bool forall = f.op == Formula::Op::ForallSubgroup;
            ev.charge(subgroup_domain.size(), f.var);
            for (std::size_t s = 0; s < subgroup_domain.size(); ++s) {
                subgroup_vars[f.var] = static_cast<int>(s);
                bool v = run(f.kids[0]);
                if (forall && !v) {
                    subgroup_vars.erase(f.var);
                    return false;
                }
                if (!forall && v) {
                    subgroup_vars.erase(f.var);
                    return true;
                }
            }
            subgroup_vars.erase(f.var);
            return forall;
        }
        case Formula::Op::EqTuple:
            return resolve_tuple(f.args[0]) == resolve_tuple(f.args[1]);
        case Formula::Op::Atom: {
            auto t = [&](std::size_t i) { return resolve_tuple(f.args[i]); };
            if (f.pred == "Indec") return im.record(t(0)).pd >= 0;
            if (f.pred == "MeetsX") return ev.meets(t(0));
            if (f.pred == "Disj")
                return (im.record(t(0)).supp & im.record(t(1)).supp) == 0;
            if (f.pred == "Sqsubset") {
                std::uint64_t a = im.record(t(0)).supp, b = im.record(t(1)).supp;
                return a != b && (a & ~b) == 0;
            }
            if (f.pred == "SamePD") return ev.same_pd(t(0), t(1));
            if (f.pred == "RepPointDec") return ev.rep_point(t(0), t(1));
            if (f.pred == "EquivRepPointDec") {
                int pds[4];
                for (int i = 0; i < 4; ++i) {
                    pds[i] = im.record(t(i)).pd;
                    if (pds[i] < 0) return false;
                }
                return im.locale_of[pds[0]] == im.locale_of[pds[1]] &&
                       im.locale_of[pds[2]] == im.locale_of[pds[3]] &&
                       im.locale_of[pds[0]] == im.locale_of[pds[2]];
            }
            if (f.pred == "RelatedDec") {
                auto a = ev.rep_pair_point(t(0), t(1));
                auto b = ev.rep_pair_point(t(2), t(3));
                if (!a || !b) return false;
                return dec_.base.less(*a, *b) || dec_.base.less(*b, *a) || *a == *b;
            }
            if (f.pred == "PathBetweenDec") {
                auto h = ev.rep_pair_point(t(0), t(1));
                auto a = ev.rep_pair_point(t(2), t(3));
                auto b = ev.rep_pair_point(t(4), t(5));
                if (!h || !a || !b) return false;
                if (*h == *a || *h == *b) return false;
                return im.path_mask[static_cast<std::size_t>(*a) * im.n + *b] >> *h & 1;
            }
            if (f.pred == "FunctionPartMember") {
                function_part(); // fills the membership cache
                auto ei = elems.find(f.elem);
                if (ei == elems.end())
                    throw InputError("unbound element variable '" + f.elem + "'");
                return im.function_part_members[ei->second] != 0;
            }
            if (f.pred == "AboveWitness" || f.pred == "BetweenWitness") {
                auto ei = elems.find(f.elem);
                if (ei == elems.end())
                    throw InputError("unbound element variable '" + f.elem + "'");
                auto fp = ev.rep_pair_point(t(0), t(1));
                if (!fp || !im.in_skeleton[*fp]) return false;
                std::set<int> target{*fp};
                if (f.pred == "BetweenWitness") {
                    auto gp = ev.rep_pair_point(t(2), t(3));
                    if (!gp || !im.in_skeleton[*gp]) return false;
                    if (!ev.adjacent_in_skeleton(*fp, *gp)) return false;
                    target.insert(*gp);
                }
                return ev.skeleton_fixed_set(ei->second) == target;
            }
            throw InputError("unknown atom '" + f.pred + "'");
        }
        case Formula::Op::SubgroupAtom: {
            auto sub = [&](std::size_t i) -> const Subgroup& {
                auto it = subgroup_vars.find(f.sub_args[i]);
                if (it == subgroup_vars.end())
                    throw InputError("unbound subgroup variable '" + f.sub_args[i] + "'");
                return subgroup_domain[it->second];
            };
            if (f.pred == "eq") return sub(0) == sub(1);
            if (f.pred == "subset") return subset_of(sub(0), sub(1));
            if (f.pred == "product_eq")
                return product_set(im, sub(0), sub(1)) == sub(2);
            if (f.pred == "conj_stable") {
                auto ei = elems.find(f.elem);
                if (ei == elems.end())
                    throw InputError("unbound element variable '" + f.elem + "'");
                return conj_subgroup(im, sub(0), ei->second) == sub(0);
            }
            if (f.pred == "proper_sub_function_part") {
                function_part();
                Subgroup fp;
                for (int e = 0; e < im.gn; ++e)
                    if (im.function_part_members[e]) fp.push_back(e);
                return sub(0) != fp && subset_of(sub(0), fp);
            }
            throw InputError("unknown subgroup atom '" + f.pred + "'");
        }
        }
        return false;
    };
    return run(formula);
}

} // namespace cfpo
