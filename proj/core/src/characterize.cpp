#include "ssfm/characterize.hpp"

#include <algorithm>
#include <optional>

#include "ssfm/polytope.hpp"
#include "ssfm/stability.hpp"

namespace ssfm {

namespace {

// x^{mu[sigma]} - x^mu: firm d loses its predecessor's target, gains its own.
FractionalMatching rotation_delta(const Market& m, const Rotation& sigma) {
    FractionalMatching d(m.num_firms(), m.num_workers());
    const std::size_t r = sigma.size();
    for (std::size_t i = 0; i < r; ++i) {
        d.at(sigma.firms[i], sigma.workers[i]) += Rational(1);
        d.at(sigma.firms[i], sigma.workers[(i + r - 1) % r]) -= Rational(1);
    }
    return d;
}

std::string flat(const FractionalMatching& x) {
    std::string s = serialize_fractional(x);
    while (!s.empty() && s.back() == '\n') s.pop_back();
    std::replace(s.begin(), s.end(), '\n', ';');
    return "[" + s + "]";
}

struct HullBasis {
    Matching mu;
    FractionalMatching base;
    std::vector<FractionalMatching> deltas;
};

HullBasis hull_basis(const Market& m, const Matching& mu) {
    HullBasis h{mu, incidence_vector(m, mu), {}};
    for (const auto& sigma : rotations_at(m, mu)) h.deltas.push_back(rotation_delta(m, sigma));
    return h;
}

// Convex combination of up to four random connected-set members.
FractionalMatching sample_point(const HullBasis& h, Rng& rng) {
    const auto terms = static_cast<std::size_t>(rng.between(1, 4));
    FractionalMatching sum = Rational(0) * h.base;
    std::int64_t total = 0;
    for (std::size_t t = 0; t < terms; ++t) {
        FractionalMatching member = h.base;
        for (const auto& d : h.deltas) {
            if (rng.coin()) member += d;
        }
        const std::int64_t w = rng.between(1, 6);
        total += w;
        sum += Rational(w) * member;
    }
    sum *= Rational(1, total);
    return sum;
}

bool is_member(const HullBasis& h, const FractionalMatching& x) {
    FractionalMatching diff = x - h.base;
    for (const auto& d : h.deltas) {
        // Every delta row has a +1 entry; its coefficient fixes lambda.
        std::optional<Rational> lambda;
        for (FirmIndex f = 0; f < d.num_firms() && !lambda; ++f) {
            for (WorkerIndex w = 0; w < d.num_workers(); ++w) {
                if (d.at(f, w) == Rational(1)) {
                    lambda = diff.at(f, w);
                    break;
                }
            }
        }
        if (!lambda || lambda->sign() < 0 || *lambda > Rational(1)) return false;
        diff -= *lambda * d;
    }
    return diff == Rational(0) * diff;
}

}  // namespace

Matching HullCertificate::term_matching(const Market& m, const Term& t) const {
    std::vector<Rotation> chosen;
    for (std::size_t id : t.rotation_ids) chosen.push_back(rotations.at(id));
    return apply_cycle_set(m, base, chosen);
}

FractionalMatching HullCertificate::reconstruct(const Market& m) const {
    FractionalMatching x(m.num_firms(), m.num_workers());
    for (const auto& t : terms) x += t.weight * incidence_vector(m, term_matching(m, t));
    return x;
}

Certification certify_strongly_stable(const Market& m, const FractionalMatching& x) {
    require_scp_feasible(m, x);
    const StrongStabilityReport report = evaluate_strong_stability(m, x);
    if (!report.overall) return Refusal{*report.first_failure()};

    const Decomposition d = decompose(m, x);
    HullCertificate cert;
    cert.base = d.terms.front().matching;
    cert.rotations = rotations_at(m, cert.base);
    for (const auto& term : d.terms) {
        HullCertificate::Term t{{}, term.weight};
        for (FirmIndex f = 0; f < m.num_firms(); ++f) {
            if (std::ranges::equal(term.matching.workers_of(f), cert.base.workers_of(f))) continue;
            const auto it = std::find_if(cert.rotations.begin(), cert.rotations.end(),
                                         [&](const Rotation& r) { return r.contains_firm(f); });
            if (it == cert.rotations.end()) {
                throw InternalError("term " + to_string(m, term.matching) + " moves firm " + m.firm_name(f) +
                                    " which no rotation at the base covers");
            }
            const auto id = static_cast<std::size_t>(it - cert.rotations.begin());
            if (std::find(t.rotation_ids.begin(), t.rotation_ids.end(), id) == t.rotation_ids.end()) {
                t.rotation_ids.push_back(id);
            }
        }
        std::sort(t.rotation_ids.begin(), t.rotation_ids.end());
        if (cert.term_matching(m, t) != term.matching) {
            throw InternalError("term " + to_string(m, term.matching) + " is not a cyclic matching of the base");
        }
        cert.terms.push_back(std::move(t));
    }
    if (cert.reconstruct(m) != x) throw InternalError("certificate does not reproduce its input");
    return cert;
}

bool hull_membership(const Market& m, const Matching& mu, const FractionalMatching& x) {
    return is_member(hull_basis(m, mu), x);
}

bool in_some_hull(const Market& m, const std::vector<Matching>& stable, const FractionalMatching& x) {
    return std::any_of(stable.begin(), stable.end(), [&](const Matching& mu) { return hull_membership(m, mu, x); });
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("Rng::below requires n > 0");
    // 2^64 mod n; draws under it would bias the low residues.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = engine_();
        if (r >= threshold) return r % n;
    }
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw InvalidArgument("Rng::between requires lo <= hi");
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

std::vector<FractionalMatching> sample_hull(const Market& m, const Matching& mu, std::uint64_t seed,
                                            std::size_t count) {
    std::vector<FractionalMatching> out;
    if (count == 0) return out;
    const HullBasis h = hull_basis(m, mu);
    Rng rng(seed);
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(sample_point(h, rng));
    return out;
}

FractionalMatching walk_to_vertex(const Market& m, const FractionalMatching& start, Rng& rng) {
    require_scp_feasible(m, start);
    const AcceptablePairSet pairs(m);
    const std::size_t n = pairs.size();
    const auto constraints = scp_constraints(m, pairs);
    linalg::Vector v = restrict_to_pairs(start, pairs);

    for (std::size_t step = 0; step <= n; ++step) {
        const auto basis = linalg::null_space(tight_rows(constraints, v), n);
        if (basis.empty()) return expand_from_pairs(m, pairs, v);

        linalg::Vector d(n, Rational(0));
        for (const auto& b : basis) {
            const Rational c(rng.between(-3, 3));
            for (std::size_t i = 0; i < n; ++i) d[i] += c * b[i];
        }
        if (std::all_of(d.begin(), d.end(), [](const Rational& r) { return r.is_zero(); })) {
            d = basis[rng.below(basis.size())];
        }

        // The polytope is bounded, so d or -d meets a constraint.
        std::optional<Rational> step_len;
        for (int attempt = 0; attempt < 2 && !step_len; ++attempt) {
            if (attempt == 1) {
                for (auto& e : d) e = -e;
            }
            for (const auto& c : constraints) {
                const Rational lhs = linalg::dot(c.coeffs, v);
                const Rational rate = linalg::dot(c.coeffs, d);
                Rational slack = c.rhs - lhs;
                Rational approach = rate;
                if (c.sense == LinearConstraint::Sense::GreaterEqual) {
                    slack = -slack;
                    approach = -rate;
                }
                if (approach.sign() <= 0 || slack.sign() <= 0) continue;
                Rational t = slack;
                t /= approach;
                if (!step_len || t < *step_len) step_len = t;
            }
        }
        if (!step_len) throw InternalError("vertex walk found an unbounded direction");
        for (std::size_t i = 0; i < n; ++i) v[i] += *step_len * d[i];
    }
    throw InternalError("vertex walk did not reach a vertex within |A| steps");
}

CharacterizationReport verify_characterization(const Market& m, std::uint64_t seed, std::size_t samples) {
    CharacterizationReport rep;
    const std::vector<Matching> stable = enumerate_stable_bruteforce(m);
    rep.stable_matchings = stable.size();
    std::vector<HullBasis> hulls;
    for (const auto& mu : stable) hulls.push_back(hull_basis(m, mu));
    const AcceptablePairSet pairs(m);
    Rng rng(seed);

    auto report = [&](const std::string& kind, const FractionalMatching& x, const std::string& detail) {
        rep.counterexamples.push_back(kind + ": " + detail + " x=" + flat(x));
    };

    // Certificate round trip, decomposition chain and almost-integrality for
    // a point already known to pass the condition.
    auto check_passing = [&](const FractionalMatching& x) {
        try {
            const Certification c = certify_strongly_stable(m, x);
            const auto* cert = std::get_if<HullCertificate>(&c);
            if (cert == nullptr) {
                report("certify", x, "refused a point that passes the condition");
                return;
            }
            Rational total(0);
            std::vector<FractionalMatching> chain;
            for (const auto& t : cert->terms) {
                if (t.weight.sign() <= 0) report("certify", x, "non-positive weight " + t.weight.str());
                total += t.weight;
                chain.push_back(incidence_vector(m, cert->term_matching(m, t)));
            }
            if (total != Rational(1)) report("certify", x, "weights sum to " + total.str());
            for (std::size_t l = 0; l + 1 < chain.size(); ++l) {
                if (side_dominance(m, chain[l], chain[l + 1], Side::Firms) != Dominance::StronglyDominates) {
                    report("chain", x, "adjacent terms not strictly firm-ordered");
                }
            }
            if (cert->reconstruct(m) != x) report("certify", x, "reconstruction differs");
            ++rep.certified;
        } catch (const Error& e) {
            report("certify", x, e.what());
        }
        ++rep.almost_integral_checked;
        if (!check_almost_integral(m, x)) report("almost-integral", x, "not almost-integral");
    };

    // Points inside a hull must pass.
    for (std::size_t i = 0; i < samples; ++i) {
        const FractionalMatching x = sample_point(hulls[i % hulls.size()], rng);
        ++rep.hull_samples;
        if (!check_scp(m, x).feasible()) {
            report("hull-outside-scp", x, "hull point violates SCP");
            continue;
        }
        const StrongStabilityReport ss = evaluate_strong_stability(m, x);
        if (!ss.overall) {
            const auto* p = ss.first_failure();
            report("backward", x,
                   "hull point fails at (" + m.firm_name(p->firm) + "," + m.worker_name(p->worker) + ")");
            continue;
        }
        check_passing(x);
    }

    // SCP points from mixed sources: membership must agree with the condition.
    auto random_stable = [&]() { return hulls[rng.below(hulls.size())].base; };
    auto candidate = [&](std::size_t strategy) -> FractionalMatching {
        switch (strategy % 4) {
            case 0: {
                FractionalMatching x = sample_point(hulls[rng.below(hulls.size())], rng);
                if (pairs.empty()) return x;
                const auto& p = pairs.pairs()[rng.below(pairs.size())];
                const Rational delta(rng.coin() ? 1 : -1, rng.between(2, 6));
                x.at(p.firm, p.worker) += delta;
                return x;
            }
            case 1: {
                const std::int64_t a = rng.between(1, 5);
                const std::int64_t b = rng.between(1, 5);
                FractionalMatching x = Rational(a) * random_stable() + Rational(b) * random_stable();
                x *= Rational(1, a + b);
                return x;
            }
            case 2: {
                FractionalMatching x = random_stable() + random_stable() + sample_point(hulls[rng.below(hulls.size())], rng);
                x *= Rational(1, 3);
                return x;
            }
            default: {
                FractionalMatching start = (random_stable() + random_stable());
                start *= Rational(1, 2);
                const FractionalMatching v = walk_to_vertex(m, start, rng);
                FractionalMatching x = start + v;
                x *= Rational(1, 2);
                return x;
            }
        }
    };
    std::vector<FractionalMatching> outside;
    for (std::size_t i = 0; i < samples; ++i) {
        std::optional<FractionalMatching> x;
        for (int tries = 0; tries < 20 && !x; ++tries) {
            FractionalMatching c = candidate(i);
            if (check_scp(m, c).feasible()) x = std::move(c);
        }
        if (!x) continue;
        ++rep.candidates;
        const bool inside = std::any_of(hulls.begin(), hulls.end(), [&](const HullBasis& h) { return is_member(h, *x); });
        const bool passes = evaluate_strong_stability(m, *x).overall;
        if (!inside) {
            ++rep.candidates_outside;
            outside.push_back(*x);
        }
        if (passes && !inside) report("forward", *x, "passes the condition but lies in no hull");
        if (!passes && inside) report("backward", *x, "lies in a hull but fails the condition");
        if (passes) check_passing(*x);
    }

    // Vertices: fractional ones must fail, integral ones must be stable.
    // Walks from hull faces mostly end at integer vertices, so every other
    // walk starts from an off-hull candidate.
    const std::size_t walks = std::max<std::size_t>(4, samples / 4);
    for (std::size_t i = 0; i < walks; ++i) {
        FractionalMatching start;
        if (i % 2 == 1 && !outside.empty()) {
            start = outside[rng.below(outside.size())];
        } else {
            start = random_stable() + random_stable();
            start *= Rational(1, 2);
        }
        FractionalMatching v;
        try {
            v = walk_to_vertex(m, start, rng);
        } catch (const Error& e) {
            report("walk", start, e.what());
            continue;
        }
        ++rep.vertices;
        if (!is_extreme_point(m, v).is_vertex) report("walk", v, "walk ended off a vertex");
        if (v.is_integral()) {
            if (!is_stable(m, matching_from_incidence(m, v))) report("integer-vertex", v, "integer vertex is unstable");
        } else {
            ++rep.fractional_vertices;
            if (evaluate_strong_stability(m, v).overall) report("fractional-vertex", v, "passes the condition");
        }
    }
    return rep;
}

Market gen_random_market(std::uint64_t seed, std::size_t nf, std::size_t nw, std::size_t qmax, ListDraw mode) {
    if (nf == 0 || nw == 0 || qmax == 0) throw InvalidArgument("gen_random_market needs nf, nw, qmax >= 1");
    Rng rng(seed);
    std::vector<std::string> firms;
    std::vector<std::string> workers;
    for (std::size_t f = 0; f < nf; ++f) firms.push_back("f" + std::to_string(f + 1));
    for (std::size_t w = 0; w < nw; ++w) workers.push_back("w" + std::to_string(w + 1));
    std::vector<std::size_t> quotas;
    for (std::size_t f = 0; f < nf; ++f) quotas.push_back(static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(qmax))));

    auto draw = [&](std::size_t other) {
        std::vector<std::size_t> list(other);
        for (std::size_t i = 0; i < other; ++i) list[i] = i;
        rng.shuffle(list);
        std::vector<std::size_t> kept;
        for (std::size_t x : list) {
            if (mode == ListDraw::Complete || rng.coin()) kept.push_back(x);
        }
        return kept;
    };
    std::vector<std::vector<WorkerIndex>> firm_prefs;
    std::vector<std::vector<FirmIndex>> worker_prefs;
    for (std::size_t f = 0; f < nf; ++f) firm_prefs.push_back(draw(nw));
    for (std::size_t w = 0; w < nw; ++w) worker_prefs.push_back(draw(nf));
    return Market::create(std::move(firms), std::move(workers), std::move(quotas), std::move(firm_prefs),
                          std::move(worker_prefs));
}

}  // namespace ssfm
