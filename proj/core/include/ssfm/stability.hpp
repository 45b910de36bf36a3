#pragma once

#include <cstdint>
#include <vector>

#include "ssfm/model.hpp"

namespace ssfm {

enum class Side { Firms, Workers };

/// Deferred acceptance with quotas. Side::Firms yields the firm-optimal
/// stable matching, Side::Workers the worker-optimal one. Proposals follow
/// declaration order; strict preferences make the result order-independent.
[[nodiscard]] Matching deferred_acceptance(const Market& m, Side side);

/// Every matched pair is acceptable and no quota is exceeded.
[[nodiscard]] bool is_individually_rational(const Market& m, const Matching& mu);

struct BlockingPair {
    enum class Reason {
        FirmPrefersSwap,  // firm is full and prefers w to one of its workers
        FirmHasVacancy,   // firm has a free slot and finds w acceptable
    };
    FirmIndex firm;
    WorkerIndex worker;
    Reason reason;
    friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

[[nodiscard]] const char* to_string(BlockingPair::Reason r);

/// All blocking pairs of mu, in (firm, worker) order.
[[nodiscard]] std::vector<BlockingPair> blocking_pairs(const Market& m, const Matching& mu);

[[nodiscard]] bool is_stable(const Market& m, const Matching& mu);

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Number of worker -> (acceptable firm | unmatched) maps, saturating at
/// UINT64_MAX. This is the candidate count brute-force enumeration walks.
[[nodiscard]] std::uint64_t candidate_count(const Market& m);

/// Every individually rational matching, sorted. Throws
/// EnumerationCapExceeded when candidate_count(m) > cap.
[[nodiscard]] std::vector<Matching> enumerate_individually_rational(const Market& m,
                                                                    std::uint64_t cap = kDefaultEnumerationCap);

/// The full stable set S(P) by exhaustive search, sorted.
[[nodiscard]] std::vector<Matching> enumerate_stable_bruteforce(const Market& m,
                                                                std::uint64_t cap = kDefaultEnumerationCap);

/// Matched agents coincide across `stable`, and every firm that is under
/// quota somewhere keeps the same worker set everywhere.
[[nodiscard]] bool check_rural_hospital(const Market& m, const std::vector<Matching>& stable);

}  // namespace ssfm
