#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssfm/model.hpp"
#include "ssfm/polytope.hpp"
#include "ssfm/stability.hpp"

namespace ssfm {

/// Per-pair evaluation of the complementarity condition
///
///     [q_f - sum_{j >=_f w} x(f, j)] * [1 - sum_{i >=_w f} x(i, w)] = 0
///
/// over every acceptable pair.
struct StrongStabilityReport {
    struct PairFactors {
        FirmIndex firm;
        WorkerIndex worker;
        Rational firm_factor;
        Rational worker_factor;
        Rational product;
    };
    std::vector<PairFactors> pairs;  // AcceptablePairSet order
    bool overall = true;             // every product is zero

    /// First pair with a nonzero product, if any.
    [[nodiscard]] const PairFactors* first_failure() const;
};

/// Evaluates the condition without any feasibility precondition.
[[nodiscard]] StrongStabilityReport evaluate_strong_stability(const Market& m, const FractionalMatching& x);

/// Strong stability proper: x must lie in the stability polytope (throws
/// InfeasiblePoint otherwise); overall then says whether x is strongly stable.
[[nodiscard]] StrongStabilityReport strong_stability_check(const Market& m, const FractionalMatching& x);

/// mu_of_x found a worker among the top-quota supported workers of two firms.
class ContestedWorker : public Error {
public:
    ContestedWorker(const std::string& what, WorkerIndex worker, FirmIndex first, FirmIndex second)
        : Error(what), worker_(worker), first_(first), second_(second) {}
    [[nodiscard]] WorkerIndex worker() const { return worker_; }
    [[nodiscard]] FirmIndex first_firm() const { return first_; }
    [[nodiscard]] FirmIndex second_firm() const { return second_; }

private:
    WorkerIndex worker_;
    FirmIndex first_;
    FirmIndex second_;
};

/// The point fails the complementarity condition; carries the witness pair.
class NotStronglyStable : public Error {
public:
    NotStronglyStable(const std::string& what, StrongStabilityReport::PairFactors witness)
        : Error(what), witness_(std::move(witness)) {}
    [[nodiscard]] const StrongStabilityReport::PairFactors& witness() const { return witness_; }

private:
    StrongStabilityReport::PairFactors witness_;
};

/// Each firm takes its min(q_f, |support row|) most preferred supported
/// workers. Throws ContestedWorker if that is not a matching.
[[nodiscard]] Matching mu_of_x(const Market& m, const FractionalMatching& x);

struct PeelStep {
    Rational alpha;
    Matching matching;
    FractionalMatching residual;
};

/// Splits a strongly stable x = alpha * x^mu + (1 - alpha) * y with
/// mu = mu_of_x(x) and alpha the smallest entry of x on mu. Throws
/// NotStronglyStable when the precondition fails and InvalidArgument when
/// x is already the incidence vector of mu_of_x(x).
[[nodiscard]] PeelStep peel(const Market& m, const FractionalMatching& x);

/// Repeated peeling into a firm-decreasing chain of stable matchings whose
/// weights sum to one and reproduce x exactly.
[[nodiscard]] Decomposition decompose(const Market& m, const FractionalMatching& x);

enum class Dominance { WeaklyDominates, StronglyDominates, Dominated, Incomparable };

[[nodiscard]] const char* to_string(Dominance d);

struct Agent {
    Side side;
    std::size_t index;
    static Agent firm(FirmIndex f) { return {Side::Firms, f}; }
    static Agent worker(WorkerIndex w) { return {Side::Workers, w}; }
};

/// Compares prefix sums of x and y along the agent's preference list.
/// WeaklyDominates: x >= y at every rank. StronglyDominates: additionally
/// strict somewhere. Dominated: y strongly dominates x.
[[nodiscard]] Dominance dominance_compare(const Market& m, const FractionalMatching& x, const FractionalMatching& y,
                                          Agent agent);

/// Same relation lifted to a whole side: every agent weakly prefers x,
/// StronglyDominates when at least one agent is strict.
[[nodiscard]] Dominance side_dominance(const Market& m, const FractionalMatching& x, const FractionalMatching& y,
                                       Side side);

/// Every column has at most two positive entries, and every row has all
/// entries in {0, 1} except at most two fractional ones that sum to an
/// integer.
[[nodiscard]] bool check_almost_integral(const Market& m, const FractionalMatching& x);

}  // namespace ssfm
