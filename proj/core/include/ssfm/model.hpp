#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssfm/error.hpp"
#include "ssfm/rational.hpp"

namespace ssfm {

using FirmIndex = std::size_t;
using WorkerIndex = std::size_t;

inline constexpr std::size_t kUnranked = std::numeric_limits<std::size_t>::max();

/// A many-to-one market: firms with quotas, workers, and strict preference
/// lists over mutually acceptable partners (most preferred first).
///
/// Firm preferences over worker sets are never stored. They are the
/// responsive extension of the individual list truncated at the quota.
/// Lists are pruned to mutual acceptability on construction, so
/// firm_rank(f, w) != kUnranked exactly when worker_rank(w, f) != kUnranked.
class Market {
public:
    Market() = default;

    /// Validates agent ids, quotas and lists, then drops every one-sided
    /// entry. A description of each dropped entry is appended to
    /// `warnings` when it is non-null.
    static Market create(std::vector<std::string> firm_names, std::vector<std::string> worker_names,
                         std::vector<std::size_t> quotas, std::vector<std::vector<WorkerIndex>> firm_prefs,
                         std::vector<std::vector<FirmIndex>> worker_prefs,
                         std::vector<std::string>* warnings = nullptr);

    /// Same agents and quotas, different preference lists (pruned as in create).
    [[nodiscard]] Market with_preferences(std::vector<std::vector<WorkerIndex>> firm_prefs,
                                          std::vector<std::vector<FirmIndex>> worker_prefs) const;

    [[nodiscard]] std::size_t num_firms() const { return firm_names_.size(); }
    [[nodiscard]] std::size_t num_workers() const { return worker_names_.size(); }

    [[nodiscard]] const std::string& firm_name(FirmIndex f) const { return firm_names_.at(f); }
    [[nodiscard]] const std::string& worker_name(WorkerIndex w) const { return worker_names_.at(w); }
    [[nodiscard]] std::optional<FirmIndex> find_firm(std::string_view name) const;
    [[nodiscard]] std::optional<WorkerIndex> find_worker(std::string_view name) const;

    [[nodiscard]] std::size_t quota(FirmIndex f) const { return quotas_.at(f); }

    [[nodiscard]] std::span<const WorkerIndex> firm_prefs(FirmIndex f) const { return firm_prefs_.at(f); }
    [[nodiscard]] std::span<const FirmIndex> worker_prefs(WorkerIndex w) const { return worker_prefs_.at(w); }

    /// Position of w in f's list, kUnranked when unacceptable.
    [[nodiscard]] std::size_t firm_rank(FirmIndex f, WorkerIndex w) const {
        return firm_rank_[f * num_workers() + w];
    }
    [[nodiscard]] std::size_t worker_rank(WorkerIndex w, FirmIndex f) const {
        return worker_rank_[w * num_firms() + f];
    }
    [[nodiscard]] bool acceptable(FirmIndex f, WorkerIndex w) const { return firm_rank(f, w) != kUnranked; }

    /// Strict preference of f for a over b (both must be acceptable to f).
    [[nodiscard]] bool firm_prefers(FirmIndex f, WorkerIndex a, WorkerIndex b) const {
        return firm_rank(f, a) < firm_rank(f, b);
    }
    [[nodiscard]] bool worker_prefers(WorkerIndex w, FirmIndex a, FirmIndex b) const {
        return worker_rank(w, a) < worker_rank(w, b);
    }

    friend bool operator==(const Market&, const Market&) = default;

private:
    std::vector<std::string> firm_names_;
    std::vector<std::string> worker_names_;
    std::vector<std::size_t> quotas_;
    std::vector<std::vector<WorkerIndex>> firm_prefs_;
    std::vector<std::vector<FirmIndex>> worker_prefs_;
    std::vector<std::size_t> firm_rank_;
    std::vector<std::size_t> worker_rank_;
};

struct AcceptablePair {
    FirmIndex firm;
    WorkerIndex worker;
    friend auto operator<=>(const AcceptablePair&, const AcceptablePair&) = default;
};

/// Mutually acceptable pairs ordered by (firm, worker) declaration order.
/// The position of a pair in this order is its variable index in the
/// polytope routines.
class AcceptablePairSet {
public:
    explicit AcceptablePairSet(const Market& m);

    [[nodiscard]] std::size_t size() const { return pairs_.size(); }
    [[nodiscard]] bool empty() const { return pairs_.empty(); }
    [[nodiscard]] std::span<const AcceptablePair> pairs() const { return pairs_; }
    [[nodiscard]] bool contains(FirmIndex f, WorkerIndex w) const { return index_of(f, w) != kUnranked; }
    /// Variable index of (f, w), kUnranked when the pair is not acceptable.
    [[nodiscard]] std::size_t index_of(FirmIndex f, WorkerIndex w) const { return index_[f * num_workers_ + w]; }

    [[nodiscard]] auto begin() const { return pairs_.begin(); }
    [[nodiscard]] auto end() const { return pairs_.end(); }

private:
    std::size_t num_workers_ = 0;
    std::vector<AcceptablePair> pairs_;
    std::vector<std::size_t> index_;
};

[[nodiscard]] AcceptablePairSet acceptable_pairs(const Market& m);

/// Firm -> worker-set assignment. Worker sets are kept sorted by worker
/// index so equal matchings compare equal. Unmatched workers are those in
/// no firm's set.
class Matching {
public:
    Matching() = default;
    /// The empty matching.
    Matching(std::size_t num_firms, std::size_t num_workers);

    /// Checks quotas and that no worker is assigned twice. Acceptability is
    /// not required here; see is_individually_rational.
    static Matching from_assignment(const Market& m, std::vector<std::vector<WorkerIndex>> assignment);

    [[nodiscard]] std::size_t num_firms() const { return assignment_.size(); }
    [[nodiscard]] std::size_t num_workers() const { return partner_.size(); }
    [[nodiscard]] std::span<const WorkerIndex> workers_of(FirmIndex f) const { return assignment_.at(f); }
    [[nodiscard]] std::optional<FirmIndex> firm_of(WorkerIndex w) const;
    [[nodiscard]] bool employs(FirmIndex f, WorkerIndex w) const { return partner_.at(w) == f; }
    [[nodiscard]] const std::vector<std::vector<WorkerIndex>>& assignment() const { return assignment_; }

    friend bool operator==(const Matching& a, const Matching& b) { return a.assignment_ == b.assignment_; }
    friend auto operator<=>(const Matching& a, const Matching& b) { return a.assignment_ <=> b.assignment_; }

private:
    std::vector<std::vector<WorkerIndex>> assignment_;
    std::vector<std::size_t> partner_;  // kUnranked when unmatched
};

/// Dense |F| x |W| matrix of exact rationals.
class FractionalMatching {
public:
    FractionalMatching() = default;
    /// All-zero matrix.
    FractionalMatching(std::size_t num_firms, std::size_t num_workers);

    /// Throws InvalidArgument on ragged rows.
    static FractionalMatching from_rows(const std::vector<std::vector<Rational>>& rows);

    [[nodiscard]] std::size_t num_firms() const { return num_firms_; }
    [[nodiscard]] std::size_t num_workers() const { return num_workers_; }

    [[nodiscard]] const Rational& at(FirmIndex f, WorkerIndex w) const { return entries_[f * num_workers_ + w]; }
    Rational& at(FirmIndex f, WorkerIndex w) { return entries_[f * num_workers_ + w]; }

    /// {(f, w) : x(f, w) > 0} in (firm, worker) order.
    [[nodiscard]] std::vector<AcceptablePair> support() const;
    [[nodiscard]] std::size_t support_size() const;
    [[nodiscard]] bool is_integral() const;

    FractionalMatching& operator+=(const FractionalMatching& rhs);
    FractionalMatching& operator-=(const FractionalMatching& rhs);
    FractionalMatching& operator*=(const Rational& scale);
    friend FractionalMatching operator+(FractionalMatching a, const FractionalMatching& b) { return a += b; }
    friend FractionalMatching operator-(FractionalMatching a, const FractionalMatching& b) { return a -= b; }
    friend FractionalMatching operator*(const Rational& s, FractionalMatching a) { return a *= s; }

    friend bool operator==(const FractionalMatching&, const FractionalMatching&) = default;

private:
    std::size_t num_firms_ = 0;
    std::size_t num_workers_ = 0;
    std::vector<Rational> entries_;
};

/// 0/1 matrix with x(f, w) = 1 iff w is assigned to f.
[[nodiscard]] FractionalMatching incidence_vector(const Market& m, const Matching& mu);

/// Inverse of incidence_vector for 0/1 matrices; throws InvalidArgument otherwise.
[[nodiscard]] Matching matching_from_incidence(const Market& m, const FractionalMatching& x);

/// Ordered list of (stable matching, weight) pairs.
struct Decomposition {
    struct Term {
        Matching matching;
        Rational weight;
        friend bool operator==(const Term&, const Term&) = default;
    };
    std::vector<Term> terms;

    [[nodiscard]] Rational total_weight() const;
    /// Sum of weight * incidence vector over all terms.
    [[nodiscard]] FractionalMatching reconstruct(const Market& m) const;

    friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

// ---------------------------------------------------------------------------
// Text formats

/// Parses the line-based market format:
///
///     firms: f1 f2
///     workers: w1 w2 w3 w4
///     quota: f1=2 f2=2
///     firm f1: w1 w2 w3 w4
///     worker w1: f2 f1
///
/// '#' starts a comment. One-sided list entries are dropped and reported
/// through `warnings`. Throws ParseError carrying the offending line.
[[nodiscard]] Market parse_market(std::string_view text, std::vector<std::string>* warnings = nullptr);
[[nodiscard]] std::string serialize_market(const Market& m);

/// |F| non-blank lines of |W| rational tokens each. Rejects negative
/// entries and nonzero entries on unacceptable pairs; row and column sums
/// are left to the polytope checks.
[[nodiscard]] FractionalMatching parse_fractional(const Market& m, std::string_view text);
[[nodiscard]] std::string serialize_fractional(const FractionalMatching& x);

/// "{f1:{w1,w2}, f2:{w3,w4}}"
[[nodiscard]] std::string to_string(const Market& m, const Matching& mu);

}  // namespace ssfm
