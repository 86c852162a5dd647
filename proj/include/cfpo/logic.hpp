#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfpo/decoration.hpp"
#include "cfpo/perm_group.hpp"

namespace cfpo {

struct LogicLimits {
    int tuple_arity = 2;
    std::uint64_t quantifier_budget = 10000000;
    SearchLimits search;
};

struct PrimitivePreds {
    bool disjoint = false;
    bool support_subset = false; // supp(t0) properly inside supp(t1)
    bool same_locale = false;    // the SamePD oracle
};

/// Formula AST: tuple/element variables, conjugation terms, oracle atoms,
/// boolean connectives, quantifiers over the group, tuple space and the
/// enumerated subgroups of the function part.
struct Formula {
    enum class Op {
        True,
        And,
        Or,
        Not,
        Implies,
        ForallElem,
        ExistsElem,
        ForallTuple,
        ExistsTuple,
        ForallSubgroup,
        ExistsSubgroup,
        Atom,
        EqTuple,
        SubgroupAtom,
    };
    Op op = Op::True;
    std::vector<Formula> kids;
    std::string var; // quantified variable name

    // Atom: pred over tuple terms (args) and at most one element term (elem)
    std::string pred;
    struct TupleTerm {
        std::string var;
        std::string conj_by; // optional element variable: var^conj_by
    };
    std::vector<TupleTerm> args;
    std::string elem;

    // SubgroupAtom: pred in {eq, subset, proper_subset_function_part,
    //                        product_eq, conj_stable}; subgroup vars in sub_args
    std::vector<std::string> sub_args;

    static Formula from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    /// Built-in formulas: MeetsX (free tuple f), RepPointDec (f0, f1),
    /// FunctionPart (element phi), AboveWitness (phi; f0, f1),
    /// BetweenWitness (phi; f0, f1, g0, g1). Throws for unknown names;
    /// Above/Between run through classify_subgroups instead.
    static Formula builtin(const std::string& name);
};

struct SkeletonInterpretation {
    struct Point {
        std::string id;                      // p0, p1, ... (sorted by yield)
        std::string yield;                   // "pt:<x>" or "pair:<x>,<y>"
        std::vector<std::string> rep_points; // realized gate points in Dec
    };
    std::vector<Point> points;
    std::set<std::tuple<int, int, int>> betweenness; // (y; x, z) point indices

    bool b(int y, int x, int z) const { return betweenness.count({y, x, z}) > 0; }
    std::optional<int> point_by_yield(const std::string& yield) const;
};

/// Betweenness structure of a poset: (elements, B(y;x,z) <=> y on path(x,z)).
std::set<std::tuple<int, int, int>> path_betweenness(const Poset& p);

/// Isomorphism of betweenness structures (as plain relational structures).
bool betweenness_isomorphic(const std::vector<std::string>& dom_a,
                            const std::set<std::tuple<int, int, int>>& b_a,
                            const std::vector<std::string>& dom_b,
                            const std::set<std::tuple<int, int, int>>& b_b);

struct ClassifyResult {
    std::vector<PermGroup> subgroups;
    std::string diagnostic; // nonempty when degenerate (no witnesses)
};

enum class ClassifyMode { Above, Between };

/// A decorated poset together with a group acting on it; evaluates the
/// reconstruction machinery. The group must preserve the order; the skeleton
/// is carried for verification and for the designated semantic oracles.
/// Instances memoize tuple sweeps internally, so one instance should not be
/// shared across threads; separate instances are independent.
class ActionStructure {
public:
    ActionStructure(DecoratedPoset dec, std::optional<PermGroup> group = std::nullopt,
                    LogicLimits limits = {});

    const DecoratedPoset& decorated() const { return dec_; }
    const PermGroup& group() const { return group_; }
    const LogicLimits& limits() const { return limits_; }
    const std::vector<std::string>& skeleton_set() const { return skeleton_; }

    /// Support of a tuple (union over members), as element names.
    std::vector<std::string> support(const std::vector<Perm>& tuple) const;

    /// The gate of an indecomposable tuple: union of paths between support
    /// points minus the support, when that set is a singleton.
    std::optional<std::string> indec_point(const std::vector<Perm>& tuple) const;

    PrimitivePreds primitive_preds(const std::vector<Perm>& t0,
                                   const std::vector<Perm>& t1) const;

    /// The MeetsX formula evaluated syntactically over the oracle atoms:
    /// indecomposable, with a witness tuple that overlaps the support
    /// without nesting or sharing its locale.
    bool meets_skeleton(const std::vector<Perm>& tuple) const;

    /// The RepPointDec formula; on success returns the common gate (a
    /// skeleton point represented by the disjoint pair).
    std::optional<std::string> representation_point(const std::vector<Perm>& t0,
                                                    const std::vector<Perm>& t1) const;

    /// Quotient of indecomposable tuples by locale; the finite interpretation
    /// of (X, B). Throws InputError when no tuple is indecomposable.
    SkeletonInterpretation extract_skeleton() const;

    /// Subgroup fixing every interpreted point: the (id, eta, zeta) part.
    PermGroup function_part() const;

    /// All group elements whose fixed-point set inside the skeleton is
    /// exactly {f} (above mode) or {f,g} (between mode; pair must be adjacent).
    std::vector<Perm> fixed_point_witnesses(const std::string& f,
                                            const std::optional<std::string>& g) const;

    ClassifyResult classify_subgroups(ClassifyMode mode, const std::string& f,
                                      const std::optional<std::string>& g = std::nullopt) const;

    /// Tarskian evaluation. env binds tuple variables to tuples and element
    /// variables to group elements. Throws BudgetError when a quantifier
    /// domain would exceed the configured budget.
    bool eval(const Formula& formula,
              const std::map<std::string, std::vector<Perm>>& tuple_env = {},
              const std::map<std::string, Perm>& elem_env = {}) const;

    struct Impl; // opaque shared state (masks, tables, caches)

private:
    std::shared_ptr<Impl> impl_;
    DecoratedPoset dec_;
    PermGroup group_;
    LogicLimits limits_;
    std::vector<std::string> skeleton_;
};

} // namespace cfpo
