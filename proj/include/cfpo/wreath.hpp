#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfpo/decoration.hpp"
#include "cfpo/perm_group.hpp"

namespace cfpo {

/// One element of the double wreath product: a skeleton automorphism plus a
/// tree automorphism per skeleton point and per adjacent pair. Components are
/// stored as element indices into the factor groups.
struct WreathElement {
    int phi = 0;
    std::vector<int> eta;  // indexed like WreathProduct::skeleton_points()
    std::vector<int> zeta; // indexed like WreathProduct::skeleton_pairs()

    bool operator==(const WreathElement&) const = default;
};

struct WreathIsoReport {
    bool homomorphism = false;
    bool injective = false;
    std::optional<bool> surjective; // unset when Aut(Dec) was not computable
    std::uint64_t wreath_order = 0;
    std::uint64_t aut_dec_order = 0;
    bool exhaustive = false; // all pairs checked vs sampled
};

/// Aut(between-tree, chain) wr_pairs (Aut(above-tree) wr_points Aut(skeleton)),
/// acting on decorate(skeleton, above, between).
class WreathProduct {
public:
    WreathProduct(const Poset& skeleton, const ChainedTree& above, const ChainedTree& between,
                  const SearchLimits& limits = {});

    const DecoratedPoset& decorated() const { return dec_; }
    const PermGroup& skeleton_aut() const { return aut_x_; }
    const PermGroup& above_aut() const { return aut_s_; }
    const PermGroup& between_aut() const { return aut_t_; }

    const std::vector<std::string>& skeleton_points() const { return points_; }
    const std::vector<std::pair<std::string, std::string>>& skeleton_pairs() const {
        return pairs_;
    }

    std::uint64_t order() const { return order_; }

    WreathElement identity() const;
    /// Apply w1 first, then w0, mirroring permutation composition.
    WreathElement compose(const WreathElement& w0, const WreathElement& w1) const;
    WreathElement invert(const WreathElement& w) const;

    /// Element at a mixed-radix position in [0, order()ss); deterministic.
    WreathElement element_at(std::uint64_t index) const;

    /// The action on one element of the decorated poset.
    std::string apply(const WreathElement& w, const std::string& dec_element) const;
    /// The action as a whole permutation of the decorated poset (checked to
    /// preserve the order; failure indicates a bug).
    Perm to_permutation(const WreathElement& w) const;

    /// Homomorphism/injectivity/surjectivity of w -> to_permutation(w).
    WreathIsoReport verify_action_isomorphism(std::uint64_t sample_pairs = 10000,
                                              std::uint64_t seed = 2026,
                                              const SearchLimits& limits = {}) const;

    /// {"phi": {...}, "eta": {point: {...}}, "zeta": {"lo..hi": {...}}},
    /// each component a sparse image map.
    nlohmann::json element_to_json(const WreathElement& w) const;
    WreathElement element_from_json(const nlohmann::json& j) const;

private:
    int point_index(const std::string& x) const;
    int pair_index(const std::string& x, const std::string& y) const;

    DecoratedPoset dec_;
    PermGroup aut_x_, aut_s_, aut_t_;
    std::vector<std::string> points_;
    std::vector<std::pair<std::string, std::string>> pairs_;
    std::uint64_t order_ = 1;
    // factor multiplication tables
    std::vector<int> mul_x_, mul_s_, mul_t_;
    std::vector<int> inv_x_, inv_s_, inv_t_;
};

} // namespace cfpo
