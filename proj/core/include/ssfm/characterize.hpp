#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "ssfm/model.hpp"
#include "ssfm/rotations.hpp"
#include "ssfm/strongstab.hpp"

namespace ssfm {

/// x = sum_l weight_l * x^{base[K_l]} with every K_l a subset of the
/// rotations exposed at base.
struct HullCertificate {
    struct Term {
        std::vector<std::size_t> rotation_ids;  // indices into rotations
        Rational weight;
    };
    Matching base;
    RotationSet rotations;  // all rotations at base
    std::vector<Term> terms;

    [[nodiscard]] Matching term_matching(const Market& m, const Term& t) const;
    [[nodiscard]] FractionalMatching reconstruct(const Market& m) const;
};

/// The acceptable pair whose condition product is nonzero.
struct Refusal {
    StrongStabilityReport::PairFactors witness;
};

using Certification = std::variant<HullCertificate, Refusal>;

/// Decomposes x and rewrites every term as base[K]. Requires x in SCP.
/// Throws InternalError if a term is not reachable from the base by a set
/// of its rotations.
[[nodiscard]] Certification certify_strongly_stable(const Market& m, const FractionalMatching& x);

/// Whether x lies in the hull of {mu[K] : K subset of the rotations at mu}.
/// Decided without decomposition: the hull is a box whose edges are the
/// firm-disjoint rotation moves, so x - x^mu must split into one scalar
/// multiple in [0, 1] per rotation.
[[nodiscard]] bool hull_membership(const Market& m, const Matching& mu, const FractionalMatching& x);

/// Whether x lies in the hull around some stable matching of `stable`.
[[nodiscard]] bool in_some_hull(const Market& m, const std::vector<Matching>& stable, const FractionalMatching& x);

/// Seeded 64-bit engine plus a bounded draw that does not depend on the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform in [0, n); n > 0.
    std::uint64_t below(std::uint64_t n);
    /// Uniform in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi);
    bool coin() { return below(2) == 1; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

/// Random convex combinations of the connected set at mu with integer
/// weights in [1, 6]. Deterministic in seed.
[[nodiscard]] std::vector<FractionalMatching> sample_hull(const Market& m, const Matching& mu, std::uint64_t seed,
                                                          std::size_t count);

/// Walks from an SCP point to a vertex: repeatedly moves along a random
/// null-space direction of the tight rows until the next constraint turns
/// tight. Every step raises the tight rank, so at most |A| steps.
[[nodiscard]] FractionalMatching walk_to_vertex(const Market& m, const FractionalMatching& start, Rng& rng);

struct CharacterizationReport {
    std::size_t stable_matchings = 0;
    std::size_t hull_samples = 0;           // points drawn inside some hull
    std::size_t certified = 0;              // of those, round-tripped through certify
    std::size_t candidates = 0;             // SCP points tested against hull membership
    std::size_t candidates_outside = 0;     // of those, outside every hull
    std::size_t vertices = 0;               // vertices reached by the walk
    std::size_t fractional_vertices = 0;
    std::size_t almost_integral_checked = 0;
    std::vector<std::string> counterexamples;

    [[nodiscard]] bool ok() const { return counterexamples.empty(); }
};

/// Equivalence harness between the strong-stability condition and
/// membership in the union of connected-set hulls, plus the vertex and
/// almost-integrality consequences. `samples` hull points are spread over
/// the stable matchings; the same number of off-hull candidates is drawn.
[[nodiscard]] CharacterizationReport verify_characterization(const Market& m, std::uint64_t seed,
                                                             std::size_t samples);

enum class ListDraw {
    Subset,    // uniform random subset of the other side, random order
    Complete,  // every agent of the other side, random order
};

/// Quotas uniform in [1, qmax]; lists drawn per `draw`; one-sided entries
/// pruned. Names are f1.. and w1..
[[nodiscard]] Market gen_random_market(std::uint64_t seed, std::size_t nf, std::size_t nw, std::size_t qmax,
                                       ListDraw draw = ListDraw::Subset);

}  // namespace ssfm
