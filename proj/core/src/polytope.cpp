#include "ssfm/polytope.hpp"

#include <algorithm>

namespace ssfm {

namespace {

void check_dims(const Market& m, const FractionalMatching& x) {
    if (x.num_firms() != m.num_firms() || x.num_workers() != m.num_workers()) {
        throw InvalidArgument("fractional matching is " + std::to_string(x.num_firms()) + "x" +
                              std::to_string(x.num_workers()) + ", market is " + std::to_string(m.num_firms()) +
                              "x" + std::to_string(m.num_workers()));
    }
}

void record_le(ConstraintReport& r, ConstraintId id, const Rational& lhs, const Rational& rhs) {
    if (lhs > rhs) {
        r.violations.push_back({id, lhs, rhs});
    } else if (lhs == rhs) {
        r.tight.push_back(id);
    }
}

void record_ge(ConstraintReport& r, ConstraintId id, const Rational& lhs, const Rational& rhs) {
    if (lhs < rhs) {
        r.violations.push_back({id, lhs, rhs});
    } else if (lhs == rhs) {
        r.tight.push_back(id);
    }
}

Rational quota_of(const Market& m, FirmIndex f) { return Rational(static_cast<std::int64_t>(m.quota(f))); }

bool satisfied(const LinearConstraint& c, const Rational& lhs) {
    return c.sense == LinearConstraint::Sense::LessEqual ? lhs <= c.rhs : lhs >= c.rhs;
}

}  // namespace

const char* to_string(ConstraintKind kind) {
    switch (kind) {
        case ConstraintKind::Quota:
            return "quota";
        case ConstraintKind::WorkerCapacity:
            return "capacity";
        case ConstraintKind::NonNegativity:
            return "nonneg";
        case ConstraintKind::Acceptability:
            return "acceptability";
        case ConstraintKind::Stability:
            return "stability";
    }
    return "unknown";
}

std::string to_string(const Market& m, const ConstraintId& id) {
    std::string out = to_string(id.kind);
    switch (id.kind) {
        case ConstraintKind::Quota:
            return out + "[" + m.firm_name(id.firm) + "]";
        case ConstraintKind::WorkerCapacity:
            return out + "[" + m.worker_name(id.worker) + "]";
        default:
            return out + "[" + m.firm_name(id.firm) + "," + m.worker_name(id.worker) + "]";
    }
}

bool ConstraintReport::is_tight(const ConstraintId& id) const {
    return std::find(tight.begin(), tight.end(), id) != tight.end();
}

ConstraintReport check_cp(const Market& m, const FractionalMatching& x) {
    check_dims(m, x);
    ConstraintReport r;
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        Rational sum;
        for (WorkerIndex w = 0; w < m.num_workers(); ++w) sum += x.at(f, w);
        record_le(r, {ConstraintKind::Quota, f, kUnranked}, sum, quota_of(m, f));
    }
    for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
        Rational sum;
        for (FirmIndex f = 0; f < m.num_firms(); ++f) sum += x.at(f, w);
        record_le(r, {ConstraintKind::WorkerCapacity, kUnranked, w}, sum, Rational(1));
    }
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
            const Rational& v = x.at(f, w);
            const ConstraintId nonneg{ConstraintKind::NonNegativity, f, w};
            if (v.sign() < 0) {
                r.violations.push_back({nonneg, v, Rational(0)});
            } else if (v.is_zero() && m.acceptable(f, w)) {
                r.tight.push_back(nonneg);
            }
        }
    }
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
            if (m.acceptable(f, w)) continue;
            const ConstraintId id{ConstraintKind::Acceptability, f, w};
            if (x.at(f, w).is_zero()) {
                r.tight.push_back(id);
            } else {
                r.violations.push_back({id, x.at(f, w), Rational(0)});
            }
        }
    }
    return r;
}

ConstraintReport check_scp(const Market& m, const FractionalMatching& x) {
    ConstraintReport r = check_cp(m, x);
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        const Rational q = quota_of(m, f);
        for (WorkerIndex w : m.firm_prefs(f)) {
            Rational firm_side;
            for (WorkerIndex j : m.firm_prefs(f)) {
                if (j == w) break;
                firm_side += x.at(f, j);
            }
            Rational worker_side;
            for (FirmIndex i : m.worker_prefs(w)) {
                if (i == f) break;
                worker_side += x.at(i, w);
            }
            const Rational lhs = firm_side + q * worker_side + q * x.at(f, w);
            record_ge(r, {ConstraintKind::Stability, f, w}, lhs, q);
        }
    }
    return r;
}

void require_scp_feasible(const Market& m, const FractionalMatching& x) {
    const ConstraintReport r = check_scp(m, x);
    if (!r.feasible()) {
        const Violation& v = r.violations.front();
        throw InfeasiblePoint("point violates " + to_string(m, v.id) + " (lhs " + v.lhs.str() + ", rhs " +
                                  v.rhs.str() + ")",
                              v);
    }
}

std::vector<LinearConstraint> scp_constraints(const Market& m, const AcceptablePairSet& pairs) {
    using Sense = LinearConstraint::Sense;
    const std::size_t n = pairs.size();
    std::vector<LinearConstraint> out;
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        linalg::Vector row(n);
        for (WorkerIndex w : m.firm_prefs(f)) row[pairs.index_of(f, w)] = 1;
        out.push_back({{ConstraintKind::Quota, f, kUnranked}, std::move(row), Sense::LessEqual, quota_of(m, f)});
    }
    for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
        linalg::Vector row(n);
        for (FirmIndex f : m.worker_prefs(w)) row[pairs.index_of(f, w)] = 1;
        out.push_back({{ConstraintKind::WorkerCapacity, kUnranked, w}, std::move(row), Sense::LessEqual, Rational(1)});
    }
    for (const auto& p : pairs) {
        linalg::Vector row(n);
        row[pairs.index_of(p.firm, p.worker)] = 1;
        out.push_back({{ConstraintKind::NonNegativity, p.firm, p.worker}, std::move(row), Sense::GreaterEqual, Rational(0)});
    }
    for (const auto& p : pairs) {
        const FirmIndex f = p.firm;
        const WorkerIndex w = p.worker;
        const Rational q = quota_of(m, f);
        linalg::Vector row(n);
        for (WorkerIndex j : m.firm_prefs(f)) {
            if (j == w) break;
            row[pairs.index_of(f, j)] += 1;
        }
        for (FirmIndex i : m.worker_prefs(w)) {
            if (i == f) break;
            row[pairs.index_of(i, w)] += q;
        }
        row[pairs.index_of(f, w)] += q;
        out.push_back({{ConstraintKind::Stability, f, w}, std::move(row), Sense::GreaterEqual, q});
    }
    return out;
}

linalg::Vector restrict_to_pairs(const FractionalMatching& x, const AcceptablePairSet& pairs) {
    linalg::Vector v;
    v.reserve(pairs.size());
    for (const auto& p : pairs) v.push_back(x.at(p.firm, p.worker));
    return v;
}

FractionalMatching expand_from_pairs(const Market& m, const AcceptablePairSet& pairs, const linalg::Vector& v) {
    if (v.size() != pairs.size()) throw InvalidArgument("vector length does not match the acceptable pairs");
    FractionalMatching x(m.num_firms(), m.num_workers());
    for (std::size_t i = 0; i < v.size(); ++i) x.at(pairs.pairs()[i].firm, pairs.pairs()[i].worker) = v[i];
    return x;
}

linalg::Matrix tight_rows(const std::vector<LinearConstraint>& constraints, const linalg::Vector& v) {
    linalg::Matrix rows;
    for (const auto& c : constraints) {
        const Rational lhs = linalg::dot(c.coeffs, v);
        if (!satisfied(c, lhs)) throw InternalError("tight_rows called at an infeasible point");
        if (lhs == c.rhs) rows.push_back(c.coeffs);
    }
    return rows;
}

ExtremePointResult is_extreme_point(const Market& m, const FractionalMatching& x) {
    require_scp_feasible(m, x);
    const AcceptablePairSet pairs(m);
    const auto constraints = scp_constraints(m, pairs);
    const auto rows = tight_rows(constraints, restrict_to_pairs(x, pairs));
    const std::size_t r = linalg::rank(rows, pairs.size());
    return {r == pairs.size(), r, pairs.size()};
}

}  // namespace ssfm
