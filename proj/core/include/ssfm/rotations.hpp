#pragma once

#include <span>
#include <string>
#include <vector>

#include "ssfm/model.hpp"

namespace ssfm {

/// How the truncation steps pick their reference matchings.
enum class ReductionMode {
    /// Firm-side references come from the base matching itself, worker-side
    /// references from the worker-optimal stable matching. Under this
    /// reading the reduced market's stable set is exactly the stable
    /// matchings the base firm-dominates.
    AtMatching,
    /// Both references are the global firm- and worker-optimal matchings,
    /// whatever the base. Kept only for comparison; it is wrong away from
    /// the firm-optimal matching.
    GlobalOptimum,
};

/// Preference lists truncated around a stable matching.
struct ReducedProfile {
    Matching base;
    Market market;  // same agents and quotas, reduced lists
};

/// Three-step truncation:
///  1. firms drop workers above their best base worker; workers drop firms
///     above their worker-optimal partner;
///  2. workers drop firms below their base partner; firms drop workers
///     below their worst worker-optimal worker;
///  3. one-sided entries are removed until the lists are mutual.
/// Throws InvalidArgument when mu is not stable.
[[nodiscard]] ReducedProfile reduce_profile(const Market& m, const Matching& mu,
                                            ReductionMode mode = ReductionMode::AtMatching);

/// A cyclic exchange among full firms. workers[d] is the best reduced-list
/// worker of firms[d] outside its base set and is held at the base by
/// firms[(d + 1) % r]. Stored rotated so the smallest firm index comes first.
struct Rotation {
    std::vector<FirmIndex> firms;
    std::vector<WorkerIndex> workers;

    [[nodiscard]] std::size_t size() const { return firms.size(); }
    [[nodiscard]] bool contains_firm(FirmIndex f) const;

    friend bool operator==(const Rotation&, const Rotation&) = default;
    friend auto operator<=>(const Rotation&, const Rotation&) = default;
};

using RotationSet = std::vector<Rotation>;

/// "(f1>w4 f2>w2)": each firm followed by the worker it takes over.
[[nodiscard]] std::string to_string(const Market& m, const Rotation& r);

/// Cycles of the successor map f -> firm holding f's best outside worker
/// (undefined when f is under quota or has no outside worker left).
/// Sorted by first firm; firm sets are pairwise disjoint.
[[nodiscard]] RotationSet find_cycles(const ReducedProfile& rp);

/// find_cycles(reduce_profile(m, mu)).
[[nodiscard]] RotationSet rotations_at(const Market& m, const Matching& mu);

/// mu[sigma]: every firm of sigma swaps the worker its predecessor takes
/// for the worker it takes. Throws InvalidArgument unless sigma is a
/// rotation at mu.
[[nodiscard]] Matching apply_cycle(const Market& m, const Matching& mu, const Rotation& sigma);

/// mu[K] for pairwise firm-disjoint rotations of mu; K empty gives mu.
[[nodiscard]] Matching apply_cycle_set(const Market& m, const Matching& mu, std::span<const Rotation> rotations);

/// {mu[K] : K subset of kprime}, indexed by subset bitmask (bit i selects
/// kprime[i]); element 0 is mu.
[[nodiscard]] std::vector<Matching> connected_set(const Market& m, const Matching& mu,
                                                  std::span<const Rotation> kprime);

/// Closure of the firm-optimal matching under rotation application. Sorted.
[[nodiscard]] std::vector<Matching> enumerate_stable_via_rotations(const Market& m);

}  // namespace ssfm
