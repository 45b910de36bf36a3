#include "ssfm/strongstab.hpp"

#include <algorithm>

#include "ssfm/stability.hpp"

namespace ssfm {

namespace {

std::string pair_name(const Market& m, FirmIndex f, WorkerIndex w) {
    return "(" + m.firm_name(f) + "," + m.worker_name(w) + ")";
}

[[noreturn]] void throw_not_strongly_stable(const Market& m, const StrongStabilityReport& r) {
    const auto* bad = r.first_failure();
    throw NotStronglyStable("not strongly stable: pair " + pair_name(m, bad->firm, bad->worker) + " has factors " +
                                bad->firm_factor.str() + " and " + bad->worker_factor.str() + ", product " +
                                bad->product.str(),
                            *bad);
}

std::vector<Rational> prefix_sums(const Market& m, const FractionalMatching& x, Agent a) {
    std::vector<Rational> out;
    Rational acc;
    if (a.side == Side::Firms) {
        for (WorkerIndex w : m.firm_prefs(a.index)) {
            acc += x.at(a.index, w);
            out.push_back(acc);
        }
    } else {
        for (FirmIndex f : m.worker_prefs(a.index)) {
            acc += x.at(f, a.index);
            out.push_back(acc);
        }
    }
    return out;
}

}  // namespace

const StrongStabilityReport::PairFactors* StrongStabilityReport::first_failure() const {
    for (const auto& p : pairs) {
        if (!p.product.is_zero()) return &p;
    }
    return nullptr;
}

StrongStabilityReport evaluate_strong_stability(const Market& m, const FractionalMatching& x) {
    if (x.num_firms() != m.num_firms() || x.num_workers() != m.num_workers()) {
        throw InvalidArgument("fractional matching dimensions do not match the market");
    }
    StrongStabilityReport r;
    for (const auto& [f, w] : AcceptablePairSet(m)) {
        Rational firm_sum;
        for (WorkerIndex j : m.firm_prefs(f)) {
            firm_sum += x.at(f, j);
            if (j == w) break;
        }
        Rational worker_sum;
        for (FirmIndex i : m.worker_prefs(w)) {
            worker_sum += x.at(i, w);
            if (i == f) break;
        }
        Rational firm_factor = Rational(static_cast<std::int64_t>(m.quota(f))) - firm_sum;
        Rational worker_factor = Rational(1) - worker_sum;
        Rational product = firm_factor * worker_factor;
        if (!product.is_zero()) r.overall = false;
        r.pairs.push_back({f, w, std::move(firm_factor), std::move(worker_factor), std::move(product)});
    }
    return r;
}

StrongStabilityReport strong_stability_check(const Market& m, const FractionalMatching& x) {
    require_scp_feasible(m, x);
    return evaluate_strong_stability(m, x);
}

Matching mu_of_x(const Market& m, const FractionalMatching& x) {
    if (x.num_firms() != m.num_firms() || x.num_workers() != m.num_workers()) {
        throw InvalidArgument("fractional matching dimensions do not match the market");
    }
    std::vector<std::vector<WorkerIndex>> assignment(m.num_firms());
    std::vector<std::size_t> owner(m.num_workers(), kUnranked);
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        for (WorkerIndex w : m.firm_prefs(f)) {
            if (assignment[f].size() == m.quota(f)) break;
            if (x.at(f, w).sign() <= 0) continue;
            if (owner[w] != kUnranked) {
                throw ContestedWorker("worker '" + m.worker_name(w) + "' is among the best supported workers of both '" +
                                          m.firm_name(owner[w]) + "' and '" + m.firm_name(f) + "'",
                                      w, owner[w], f);
            }
            owner[w] = f;
            assignment[f].push_back(w);
        }
    }
    return Matching::from_assignment(m, std::move(assignment));
}

PeelStep peel(const Market& m, const FractionalMatching& x) {
    const StrongStabilityReport report = strong_stability_check(m, x);
    if (!report.overall) throw_not_strongly_stable(m, report);

    Matching mu = mu_of_x(m, x);
    const FractionalMatching xm = incidence_vector(m, mu);
    if (x == xm) throw InvalidArgument("point is already the incidence vector of a stable matching");
    if (!is_stable(m, mu)) throw InternalError("best-supported matching of a strongly stable point is unstable");

    std::optional<Rational> alpha;
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        for (WorkerIndex w : mu.workers_of(f)) {
            if (!alpha || x.at(f, w) < *alpha) alpha = x.at(f, w);
        }
    }
    if (!alpha || alpha->sign() <= 0 || *alpha >= Rational(1)) {
        throw InternalError("peel weight outside (0, 1)");
    }
    FractionalMatching y = x - *alpha * xm;
    y *= Rational(1) / (Rational(1) - *alpha);

    const auto sy = y.support();
    const auto sx = x.support();
    if (sy.size() >= sx.size() || !std::includes(sx.begin(), sx.end(), sy.begin(), sy.end())) {
        throw InternalError("peel residual support is not a proper subset");
    }
    return {*alpha, std::move(mu), std::move(y)};
}

Decomposition decompose(const Market& m, const FractionalMatching& x) {
    const StrongStabilityReport report = strong_stability_check(m, x);
    if (!report.overall) throw_not_strongly_stable(m, report);

    Decomposition d;
    Rational remaining(1);
    FractionalMatching current = x;
    const std::size_t max_steps = x.support_size() + 1;
    for (std::size_t step = 0;; ++step) {
        if (step >= max_steps) throw InternalError("decomposition did not terminate within the support bound");
        Matching mu = mu_of_x(m, current);
        if (current == incidence_vector(m, mu)) {
            d.terms.push_back({std::move(mu), remaining});
            break;
        }
        PeelStep p = peel(m, current);
        d.terms.push_back({std::move(p.matching), remaining * p.alpha});
        remaining *= Rational(1) - p.alpha;
        current = std::move(p.residual);
    }
    if (d.reconstruct(m) != x) throw InternalError("decomposition does not reproduce its input");
    return d;
}

const char* to_string(Dominance d) {
    switch (d) {
        case Dominance::WeaklyDominates:
            return "weakly-dominates";
        case Dominance::StronglyDominates:
            return "strongly-dominates";
        case Dominance::Dominated:
            return "dominated";
        case Dominance::Incomparable:
            return "incomparable";
    }
    return "unknown";
}

Dominance dominance_compare(const Market& m, const FractionalMatching& x, const FractionalMatching& y, Agent agent) {
    const auto px = prefix_sums(m, x, agent);
    const auto py = prefix_sums(m, y, agent);
    bool some_greater = false;
    bool some_less = false;
    for (std::size_t i = 0; i < px.size(); ++i) {
        if (px[i] > py[i]) some_greater = true;
        if (px[i] < py[i]) some_less = true;
    }
    if (some_greater && some_less) return Dominance::Incomparable;
    if (some_less) return Dominance::Dominated;
    return some_greater ? Dominance::StronglyDominates : Dominance::WeaklyDominates;
}

Dominance side_dominance(const Market& m, const FractionalMatching& x, const FractionalMatching& y, Side side) {
    const std::size_t n = side == Side::Firms ? m.num_firms() : m.num_workers();
    bool some_strict = false;
    bool some_dominated = false;
    for (std::size_t i = 0; i < n; ++i) {
        switch (dominance_compare(m, x, y, {side, i})) {
            case Dominance::Incomparable:
                return Dominance::Incomparable;
            case Dominance::StronglyDominates:
                some_strict = true;
                break;
            case Dominance::Dominated:
                some_dominated = true;
                break;
            case Dominance::WeaklyDominates:
                break;
        }
    }
    if (some_strict && some_dominated) return Dominance::Incomparable;
    if (some_dominated) return Dominance::Dominated;
    return some_strict ? Dominance::StronglyDominates : Dominance::WeaklyDominates;
}

bool check_almost_integral(const Market& m, const FractionalMatching& x) {
    for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
        std::size_t positive = 0;
        for (FirmIndex f = 0; f < m.num_firms(); ++f) positive += x.at(f, w).sign() > 0 ? 1 : 0;
        if (positive > 2) return false;
    }
    const Rational one(1);
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        std::vector<const Rational*> fractional;
        for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
            const Rational& v = x.at(f, w);
            if (v.is_integer()) {
                if (!v.is_zero() && v != one) return false;
            } else {
                fractional.push_back(&v);
            }
        }
        if (fractional.size() > 2) return false;
        if (fractional.size() == 1) return false;
        if (fractional.size() == 2 && !(*fractional[0] + *fractional[1]).is_integer()) return false;
    }
    return true;
}

}  // namespace ssfm
