#include "cfpo/wreath.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <set>

namespace cfpo {

namespace {

std::vector<int> make_mul(const PermGroup& g) {
    int n = static_cast<int>(g.order());
    std::vector<int> mul(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            mul[static_cast<std::size_t>(a) * n + b] =
                g.element_index(compose(g.elements()[a], g.elements()[b]));
    return mul;
}

std::vector<int> make_inv(const PermGroup& g) {
    int n = static_cast<int>(g.order());
    std::vector<int> inv(n);
    for (int a = 0; a < n; ++a) inv[a] = g.element_index(inverse(g.elements()[a]));
    return inv;
}

} // namespace

WreathProduct::WreathProduct(const Poset& skeleton, const ChainedTree& above,
                             const ChainedTree& between, const SearchLimits& limits) {
    dec_ = decorate(skeleton, above, between);
    aut_x_ = automorphism_group(skeleton, {}, {}, limits);
    aut_s_ = above.empty() ? PermGroup::trivial({})
                           : automorphism_group(above.base, {}, {}, limits);
    if (between.empty()) {
        aut_t_ = PermGroup::trivial({});
    } else {
        std::map<std::string, std::set<std::string>> preds;
        preds["chain"] = std::set<std::string>(between.chain.begin(), between.chain.end());
        aut_t_ = automorphism_group(between.base, {}, preds, limits);
    }
    points_ = skeleton.elements();
    pairs_ = skeleton.cover_pairs_named();

    order_ = aut_x_.order();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (order_ > UINT64_MAX / aut_s_.order())
            throw BudgetError("wreath order overflows");
        order_ *= aut_s_.order();
    }
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        if (order_ > UINT64_MAX / aut_t_.order())
            throw BudgetError("wreath order overflows");
        order_ *= aut_t_.order();
    }

    mul_x_ = make_mul(aut_x_);
    inv_x_ = make_inv(aut_x_);
    mul_s_ = make_mul(aut_s_);
    inv_s_ = make_inv(aut_s_);
    mul_t_ = make_mul(aut_t_);
    inv_t_ = make_inv(aut_t_);
}

int WreathProduct::point_index(const std::string& x) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), x);
    assert(it != points_.end() && *it == x);
    return static_cast<int>(it - points_.begin());
}

int WreathProduct::pair_index(const std::string& x, const std::string& y) const {
    auto key = std::make_pair(x, y);
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), key);
    assert(it != pairs_.end() && *it == key);
    return static_cast<int>(it - pairs_.begin());
}

WreathElement WreathProduct::identity() const {
    WreathElement w;
    w.phi = aut_x_.element_index(Perm::identity(aut_x_.degree()));
    w.eta.assign(points_.size(), aut_s_.element_index(Perm::identity(aut_s_.degree())));
    w.zeta.assign(pairs_.size(), aut_t_.element_index(Perm::identity(aut_t_.degree())));
    return w;
}

WreathElement WreathProduct::compose(const WreathElement& w0, const WreathElement& w1) const {
    // w1 acts first. Components of w0 are read at the w1-image of each index,
    // which is what makes apply(compose(w0,w1), e) == apply(w0, apply(w1, e)).
    const Perm& phi1 = aut_x_.elements()[w1.phi];
    WreathElement w;
    w.phi = mul_x_[static_cast<std::size_t>(w0.phi) * aut_x_.order() + w1.phi];
    w.eta.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        int moved = phi1(static_cast<int>(i));
        w.eta[i] = mul_s_[static_cast<std::size_t>(w0.eta[moved]) * aut_s_.order() + w1.eta[i]];
    }
    w.zeta.resize(pairs_.size());
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        int a = phi1(point_index(pairs_[i].first));
        int b = phi1(point_index(pairs_[i].second));
        int moved = pair_index(points_[a], points_[b]);
        w.zeta[i] = mul_t_[static_cast<std::size_t>(w0.zeta[moved]) * aut_t_.order() + w1.zeta[i]];
    }
    return w;
}

WreathElement WreathProduct::invert(const WreathElement& w) const {
    const Perm phi_inv = inverse(aut_x_.elements()[w.phi]);
    WreathElement out;
    out.phi = inv_x_[w.phi];
    out.eta.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i)
        out.eta[i] = inv_s_[w.eta[phi_inv(static_cast<int>(i))]];
    out.zeta.resize(pairs_.size());
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        int a = phi_inv(point_index(pairs_[i].first));
        int b = phi_inv(point_index(pairs_[i].second));
        out.zeta[i] = inv_t_[w.zeta[pair_index(points_[a], points_[b])]];
    }
    return out;
}

WreathElement WreathProduct::element_at(std::uint64_t index) const {
    assert(index < order_);
    WreathElement w;
    w.zeta.resize(pairs_.size());
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        w.zeta[i] = static_cast<int>(index % aut_t_.order());
        index /= aut_t_.order();
    }
    w.eta.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        w.eta[i] = static_cast<int>(index % aut_s_.order());
        index /= aut_s_.order();
    }
    w.phi = static_cast<int>(index % aut_x_.order());
    return w;
}

std::string WreathProduct::apply(const WreathElement& w, const std::string& dec_element) const {
    auto it = dec_.provenance.find(dec_element);
    if (it == dec_.provenance.end())
        throw InputError("'" + dec_element + "' is not in the decorated poset");
    const Provenance& pv = it->second;
    const Perm& phi = aut_x_.elements()[w.phi];

    switch (pv.kind) {
    case Provenance::Kind::Skeleton:
        return points_[phi(point_index(dec_element))];
    case Provenance::Kind::Above: {
        int xi = point_index(pv.anchor);
        const Perm& h = aut_s_.elements()[w.eta[xi]];
        return points_[phi(xi)] + "/" + aut_s_.image_name(h, pv.source);
    }
    case Provenance::Kind::Between: {
        int ai = point_index(pv.anchor);
        int bi = point_index(pv.anchor2);
        const Perm& h = aut_t_.elements()[w.zeta[pair_index(pv.anchor, pv.anchor2)]];
        return points_[phi(ai)] + ".." + points_[phi(bi)] + "/" + aut_t_.image_name(h, pv.source);
    }
    }
    throw std::logic_error("unreachable");
}

Perm WreathProduct::to_permutation(const WreathElement& w) const {
    const auto& names = dec_.base.elements();
    Perm p;
    p.img.resize(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        int j = dec_.base.index_of(apply(w, names[i]));
        assert(j >= 0);
        p.img[i] = j;
    }
    // covers map into lt in both directions, which for a bijection pins the
    // whole order
    Perm q = inverse(p);
    for (auto& [i, j] : dec_.base.cover_pairs()) {
        if (!dec_.base.less(p.img[i], p.img[j]))
            throw std::logic_error("wreath action is not order-preserving");
        if (!dec_.base.less(q.img[i], q.img[j]))
            throw std::logic_error("wreath action is not order-preserving");
    }
    return p;
}

namespace {

nlohmann::json perm_map_json(const PermGroup& g, const Perm& p) {
    nlohmann::json m = nlohmann::json::object();
    for (int i = 0; i < p.degree(); ++i)
        if (p(i) != i) m[g.domain()[i]] = g.domain()[p(i)];
    return m;
}

int perm_from_map(const PermGroup& g, const nlohmann::json& m) {
    Perm p = Perm::identity(g.degree());
    for (auto& [from, to] : m.items()) {
        auto fi = std::lower_bound(g.domain().begin(), g.domain().end(), from);
        auto ti = std::lower_bound(g.domain().begin(), g.domain().end(), to.get<std::string>());
        if (fi == g.domain().end() || *fi != from || ti == g.domain().end() ||
            *ti != to.get<std::string>())
            throw InputError("wreath component mentions unknown element");
        p.img[fi - g.domain().begin()] = static_cast<int>(ti - g.domain().begin());
    }
    int idx = g.element_index(p);
    if (idx < 0) throw InputError("wreath component is not an automorphism of its factor");
    return idx;
}

} // namespace

nlohmann::json WreathProduct::element_to_json(const WreathElement& w) const {
    nlohmann::json j;
    j["phi"] = perm_map_json(aut_x_, aut_x_.elements()[w.phi]);
    nlohmann::json eta = nlohmann::json::object();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        auto m = perm_map_json(aut_s_, aut_s_.elements()[w.eta[i]]);
        if (!m.empty()) eta[points_[i]] = m;
    }
    j["eta"] = eta;
    nlohmann::json zeta = nlohmann::json::object();
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        auto m = perm_map_json(aut_t_, aut_t_.elements()[w.zeta[i]]);
        if (!m.empty()) zeta[pairs_[i].first + ".." + pairs_[i].second] = m;
    }
    j["zeta"] = zeta;
    return j;
}

WreathElement WreathProduct::element_from_json(const nlohmann::json& j) const {
    WreathElement w = identity();
    if (j.contains("phi")) w.phi = perm_from_map(aut_x_, j.at("phi"));
    if (j.contains("eta"))
        for (auto& [pt, m] : j.at("eta").items()) {
            auto it = std::lower_bound(points_.begin(), points_.end(), pt);
            if (it == points_.end() || *it != pt)
                throw InputError("eta mentions unknown skeleton point '" + pt + "'");
            w.eta[it - points_.begin()] = perm_from_map(aut_s_, m);
        }
    if (j.contains("zeta"))
        for (auto& [key, m] : j.at("zeta").items()) {
            auto sep = key.find("..");
            if (sep == std::string::npos)
                throw InputError("zeta keys look like 'lo..hi'");
            auto pr = std::make_pair(key.substr(0, sep), key.substr(sep + 2));
            auto it = std::lower_bound(pairs_.begin(), pairs_.end(), pr);
            if (it == pairs_.end() || *it != pr)
                throw InputError("zeta mentions unknown adjacent pair '" + key + "'");
            w.zeta[it - pairs_.begin()] = perm_from_map(aut_t_, m);
        }
    return w;
}

WreathIsoReport WreathProduct::verify_action_isomorphism(std::uint64_t sample_pairs,
                                                         std::uint64_t seed,
                                                         const SearchLimits& limits) const {
    WreathIsoReport rep;
    rep.wreath_order = order_;

    std::mt19937_64 rng(seed);
    auto rand_index = [&]() { return rng() % order_; };

    rep.homomorphism = true;
    rep.exhaustive = order_ <= 100; // all pairs when the group is small
    auto check_pair = [&](std::uint64_t i, std::uint64_t j) {
        WreathElement a = element_at(i), b = element_at(j);
        Perm lhs = to_permutation(compose(a, b));
        Perm rhs = ::cfpo::compose(to_permutation(a), to_permutation(b));
        if (!(lhs == rhs)) rep.homomorphism = false;
    };
    if (rep.exhaustive) {
        for (std::uint64_t i = 0; i < order_ && rep.homomorphism; ++i)
            for (std::uint64_t j = 0; j < order_ && rep.homomorphism; ++j) check_pair(i, j);
    } else {
        for (std::uint64_t k = 0; k < sample_pairs && rep.homomorphism; ++k)
            check_pair(rand_index(), rand_index());
    }

    if (order_ <= limits.max_order) {
        std::set<Perm> image;
        for (std::uint64_t i = 0; i < order_; ++i) image.insert(to_permutation(element_at(i)));
        rep.injective = image.size() == order_;

        if (dec_.base.size() <= static_cast<std::size_t>(limits.max_degree)) {
            PermGroup aut = automorphism_group(dec_.base, {}, {}, limits);
            rep.aut_dec_order = aut.order();
            for (const auto& p : image)
                if (!aut.contains(p)) throw std::logic_error("wreath image escapes Aut(Dec)");
            rep.surjective = image.size() == aut.order();
        }
    } else {
        rep.injective = true;
        for (std::uint64_t k = 0; k < sample_pairs; ++k) {
            std::uint64_t i = rand_index(), j = rand_index();
            if (i == j) continue;
            if (to_permutation(element_at(i)) == to_permutation(element_at(j)))
                rep.injective = false;
        }
    }
    return rep;
}

} // namespace cfpo
