#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cfpo/errors.hpp"
#include "cfpo/poset.hpp"

namespace cfpo {

/// Permutation as an image vector over 0..n-1. The domain names live in the
/// containing PermGroup / structure.
struct Perm {
    std::vector<int> img;

    static Perm identity(int n);
    int degree() const { return static_cast<int>(img.size()); }
    int operator()(int i) const { return img[i]; }
    bool is_identity() const;

    auto operator<=>(const Perm&) const = default;
};

/// a then b reads right-to-left: (a*b)(x) = a(b(x)), b applied first.
Perm compose(const Perm& a, const Perm& b);
Perm inverse(const Perm& a);

struct SearchLimits {
    int max_degree = 40;            // automorphism search size bound
    std::size_t max_order = 100000; // eager materialization bound
    std::size_t max_subgroup_order = 256;
    std::size_t max_iso_order = 4096;
};

/// Finite permutation group given by its full (materialized) element set,
/// kept sorted by image tuple; generators are a greedy minimal subset.
class PermGroup {
public:
    PermGroup() = default;
    static PermGroup trivial(std::vector<std::string> domain);
    /// Closure of the generators. Throws BudgetError past limits.max_order.
    static PermGroup generated(std::vector<std::string> domain, std::vector<Perm> gens,
                               const SearchLimits& limits = {});
    /// Wrap an already-closed element set (verified in debug builds).
    static PermGroup from_elements(std::vector<std::string> domain, std::vector<Perm> elems);

    const std::vector<std::string>& domain() const { return domain_; }
    const std::vector<Perm>& elements() const { return elements_; }
    const std::vector<Perm>& generators() const { return generators_; }
    std::size_t order() const { return elements_.size(); }
    int degree() const { return static_cast<int>(domain_.size()); }

    bool contains(const Perm& p) const;
    int element_index(const Perm& p) const;

    std::string image_name(const Perm& p, const std::string& e) const;

private:
    void pick_generators();

    std::vector<std::string> domain_;
    std::vector<Perm> elements_;
    std::vector<Perm> generators_;
};

/// All order-, colour- and predicate-preserving bijections of p, found by
/// backtracking over a degree/height/neighbour-hash partition refinement.
PermGroup automorphism_group(const Poset& p,
                             const std::map<std::string, std::string>& colors = {},
                             const std::map<std::string, std::set<std::string>>& predicates = {},
                             const SearchLimits& limits = {});

struct OrbitReport {
    std::vector<std::vector<std::string>> orbits; // partition of A, sorted
    bool transitive_on_set = false;
    bool transitive_on_adjacent_pairs = false;
};

/// Orbits of G on A plus transitivity flags (pairs taken in the suborder
/// induced on A).
OrbitReport orbit_report(const PermGroup& g, const Poset& host,
                         const std::vector<std::string>& set);

enum class StabilizerMode { Setwise, Pointwise };

PermGroup stabilizer(const PermGroup& g, const std::vector<std::string>& set,
                     StabilizerMode mode);

/// Every subgroup (not just up to conjugacy), by repeated cyclic extension.
std::vector<PermGroup> all_subgroups(const PermGroup& g, const SearchLimits& limits = {});

/// Generator-image backtracking; returns an isomorphism witness as a map
/// element-of-g -> element-of-h (by element index), or nullopt.
std::optional<std::vector<int>> find_group_isomorphism(const PermGroup& g, const PermGroup& h,
                                                       const SearchLimits& limits = {});

} // namespace cfpo
