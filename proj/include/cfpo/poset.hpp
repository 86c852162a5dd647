#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfpo/errors.hpp"

namespace cfpo {

enum class RelationKind { Covers, Lt };

/// Finite strict partial order over string-identified elements.
///
/// Elements are kept sorted lexicographically; every derived set (covers,
/// components, paths) is produced in that order, so identical inputs give
/// identical outputs.
class Poset {
public:
    Poset() = default;

    /// Build from either cover pairs (lt = transitive closure) or lt pairs
    /// (validated, then covers derived). Throws InputError on reflexive
    /// pairs or on a cycle; the error message carries a witness cycle.
    static Poset build(std::vector<std::string> elements,
                       const std::vector<std::pair<std::string, std::string>>& pairs,
                       RelationKind kind);

    std::size_t size() const { return names_.size(); }
    bool empty() const { return names_.empty(); }

    const std::vector<std::string>& elements() const { return names_; }
    bool contains(const std::string& e) const { return index_of(e) >= 0; }
    int index_of(const std::string& e) const;
    const std::string& name_of(int i) const { return names_[i]; }

    bool less(int i, int j) const { return lt_[idx(i, j)] != 0; }
    bool less(const std::string& a, const std::string& b) const;
    bool comparable(int i, int j) const { return less(i, j) || less(j, i); }

    /// Cover pairs (i,j): i < j with nothing strictly between.
    const std::vector<std::pair<int, int>>& cover_pairs() const { return covers_; }
    std::vector<std::pair<std::string, std::string>> cover_pairs_named() const;

    /// Undirected cover-graph neighbours of i, ascending.
    const std::vector<int>& neighbours(int i) const { return adj_[i]; }

    /// All lt pairs, ascending.
    std::vector<std::pair<std::string, std::string>> lt_pairs_named() const;
    std::size_t lt_count() const;

    /// True iff the undirected cover graph of every component is acyclic.
    bool is_cycle_free() const { return cycle_.empty(); }
    /// A witness cycle (element names) when not cycle-free.
    const std::vector<std::string>& cycle_witness() const { return cycle_; }

    /// Unique simple cover-graph path between two elements, or nullopt when
    /// they sit in different components. Requires is_cycle_free().
    std::optional<std::vector<int>> path(int from, int to) const;
    std::optional<std::vector<std::string>> path(const std::string& from,
                                                 const std::string& to) const;

    /// Classes of x ~ y <=> the path from x to y exists and avoids B,
    /// over elements \ B. Classes and their members are sorted.
    std::vector<std::vector<std::string>>
    components_avoiding(const std::vector<std::string>& banned) const;

    /// Gate set of C: elements outside C lying on every path from C into
    /// the rest of C's component. Empty when C exits through two or more
    /// distinct gates or covers its whole component.
    std::vector<std::string> boundary(const std::vector<std::string>& block) const;

    /// Induced suborder on a subset (names kept).
    Poset induced(const std::vector<std::string>& subset) const;

    /// Longest-chain height of each element above the minimal elements.
    std::vector<int> heights() const;

    bool operator==(const Poset& other) const {
        return names_ == other.names_ && lt_ == other.lt_;
    }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * names_.size() + j; }
    std::vector<int> to_indices(const std::vector<std::string>& subset, const char* what) const;
    void derive();

    std::vector<std::string> names_;
    std::vector<unsigned char> lt_;
    std::vector<std::pair<int, int>> covers_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::string> cycle_;
};

/// The adjacent pairs of P: exactly its cover pairs.
std::vector<std::pair<std::string, std::string>> adjacent_pairs(const Poset& p);

} // namespace cfpo
