#pragma once

#include <string>
#include <vector>

#include "ssfm/linalg.hpp"
#include "ssfm/model.hpp"

namespace ssfm {

/// Families of linear constraints describing the feasibility polytope and
/// its stability strengthening.
enum class ConstraintKind {
    Quota,           // sum_j x(f, j) <= q_f
    WorkerCapacity,  // sum_i x(i, w) <= 1
    NonNegativity,   // x(f, w) >= 0
    Acceptability,   // x(f, w) = 0 for unacceptable (f, w)
    Stability,       // sum_{j >_f w} x(f,j) + q_f sum_{i >_w f} x(i,w) + q_f x(f,w) >= q_f
};

struct ConstraintId {
    ConstraintKind kind;
    FirmIndex firm = kUnranked;      // unused for WorkerCapacity
    WorkerIndex worker = kUnranked;  // unused for Quota
    friend bool operator==(const ConstraintId&, const ConstraintId&) = default;
};

/// "quota[f1]", "capacity[w2]", "nonneg[f1,w2]", "acceptability[f1,w2]", "stability[f2,w3]"
[[nodiscard]] std::string to_string(const Market& m, const ConstraintId& id);
[[nodiscard]] const char* to_string(ConstraintKind kind);

struct Violation {
    ConstraintId id;
    Rational lhs;
    Rational rhs;
};

/// Exact evaluation of a constraint system at a point. Nonnegativity is
/// listed as tight only on acceptable pairs; unacceptable cells are covered
/// by their Acceptability identity.
struct ConstraintReport {
    std::vector<Violation> violations;
    std::vector<ConstraintId> tight;

    [[nodiscard]] bool feasible() const { return violations.empty(); }
    [[nodiscard]] bool is_tight(const ConstraintId& id) const;
};

/// Thrown by routines whose input must lie in the stability polytope.
class InfeasiblePoint : public Error {
public:
    InfeasiblePoint(const std::string& what, Violation first) : Error(what), first_(std::move(first)) {}
    [[nodiscard]] const Violation& first_violation() const { return first_; }

private:
    Violation first_;
};

[[nodiscard]] ConstraintReport check_cp(const Market& m, const FractionalMatching& x);
[[nodiscard]] ConstraintReport check_scp(const Market& m, const FractionalMatching& x);

/// Throws InfeasiblePoint carrying the first violation when check_scp fails.
void require_scp_feasible(const Market& m, const FractionalMatching& x);

/// One constraint in the coordinate space of the acceptable pairs
/// (unacceptable cells are eliminated, not carried).
struct LinearConstraint {
    enum class Sense { LessEqual, GreaterEqual };
    ConstraintId id;
    linalg::Vector coeffs;
    Sense sense;
    Rational rhs;
};

/// Quota, capacity, nonnegativity and stability rows over the acceptable
/// pairs, in that order.
[[nodiscard]] std::vector<LinearConstraint> scp_constraints(const Market& m, const AcceptablePairSet& pairs);

/// Restriction of x to the acceptable pairs, in AcceptablePairSet order.
[[nodiscard]] linalg::Vector restrict_to_pairs(const FractionalMatching& x, const AcceptablePairSet& pairs);
[[nodiscard]] FractionalMatching expand_from_pairs(const Market& m, const AcceptablePairSet& pairs,
                                                   const linalg::Vector& v);

/// Coefficient rows of the constraints tight at v.
[[nodiscard]] linalg::Matrix tight_rows(const std::vector<LinearConstraint>& constraints, const linalg::Vector& v);

struct ExtremePointResult {
    bool is_vertex;
    std::size_t rank;       // rank of the tight system
    std::size_t dimension;  // number of acceptable pairs
};

/// x is a vertex of the stability polytope iff the constraints tight at x
/// have full rank |A(P)|. Throws InfeasiblePoint on infeasible input.
[[nodiscard]] ExtremePointResult is_extreme_point(const Market& m, const FractionalMatching& x);

}  // namespace ssfm
