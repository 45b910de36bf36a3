#include "ssfm/model.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace ssfm {

namespace {

void check_unique_names(const std::vector<std::string>& names, const char* kind) {
    std::set<std::string_view> seen;
    for (const auto& n : names) {
        if (n.empty()) throw InvalidArgument(std::string("empty ") + kind + " id");
        if (!seen.insert(n).second) throw InvalidArgument(std::string("duplicate ") + kind + " id '" + n + "'");
    }
}

template <typename Index>
void check_list(const std::vector<Index>& list, std::size_t bound, const std::string& owner) {
    std::vector<bool> seen(bound, false);
    for (Index i : list) {
        if (i >= bound) throw InvalidArgument("preference list of " + owner + " names an unknown agent");
        if (seen[i]) throw InvalidArgument("preference list of " + owner + " repeats an agent");
        seen[i] = true;
    }
}

}  // namespace

Market Market::create(std::vector<std::string> firm_names, std::vector<std::string> worker_names,
                      std::vector<std::size_t> quotas, std::vector<std::vector<WorkerIndex>> firm_prefs,
                      std::vector<std::vector<FirmIndex>> worker_prefs, std::vector<std::string>* warnings) {
    check_unique_names(firm_names, "firm");
    check_unique_names(worker_names, "worker");
    const std::size_t nf = firm_names.size();
    const std::size_t nw = worker_names.size();
    if (quotas.size() != nf) throw InvalidArgument("quota vector does not match the number of firms");
    if (firm_prefs.size() != nf) throw InvalidArgument("firm preference table does not match the number of firms");
    if (worker_prefs.size() != nw) {
        throw InvalidArgument("worker preference table does not match the number of workers");
    }
    for (std::size_t f = 0; f < nf; ++f) {
        if (quotas[f] < 1) throw InvalidArgument("quota of firm '" + firm_names[f] + "' must be at least 1");
        check_list(firm_prefs[f], nw, "firm '" + firm_names[f] + "'");
    }
    for (std::size_t w = 0; w < nw; ++w) check_list(worker_prefs[w], nf, "worker '" + worker_names[w] + "'");

    std::vector<bool> firm_lists(nf * nw, false);
    std::vector<bool> worker_lists(nf * nw, false);
    for (std::size_t f = 0; f < nf; ++f) {
        for (WorkerIndex w : firm_prefs[f]) firm_lists[f * nw + w] = true;
    }
    for (std::size_t w = 0; w < nw; ++w) {
        for (FirmIndex f : worker_prefs[w]) worker_lists[f * nw + w] = true;
    }

    Market m;
    m.firm_names_ = std::move(firm_names);
    m.worker_names_ = std::move(worker_names);
    m.quotas_ = std::move(quotas);
    m.firm_prefs_.resize(nf);
    m.worker_prefs_.resize(nw);
    for (std::size_t f = 0; f < nf; ++f) {
        for (WorkerIndex w : firm_prefs[f]) {
            if (worker_lists[f * nw + w]) {
                m.firm_prefs_[f].push_back(w);
            } else if (warnings != nullptr) {
                warnings->push_back("firm '" + m.firm_names_[f] + "' lists worker '" + m.worker_names_[w] +
                                    "' who does not list it; entry dropped");
            }
        }
    }
    for (std::size_t w = 0; w < nw; ++w) {
        for (FirmIndex f : worker_prefs[w]) {
            if (firm_lists[f * nw + w]) {
                m.worker_prefs_[w].push_back(f);
            } else if (warnings != nullptr) {
                warnings->push_back("worker '" + m.worker_names_[w] + "' lists firm '" + m.firm_names_[f] +
                                    "' which does not list it; entry dropped");
            }
        }
    }

    m.firm_rank_.assign(nf * nw, kUnranked);
    m.worker_rank_.assign(nw * nf, kUnranked);
    for (std::size_t f = 0; f < nf; ++f) {
        for (std::size_t r = 0; r < m.firm_prefs_[f].size(); ++r) m.firm_rank_[f * nw + m.firm_prefs_[f][r]] = r;
    }
    for (std::size_t w = 0; w < nw; ++w) {
        for (std::size_t r = 0; r < m.worker_prefs_[w].size(); ++r) {
            m.worker_rank_[w * nf + m.worker_prefs_[w][r]] = r;
        }
    }
    return m;
}

Market Market::with_preferences(std::vector<std::vector<WorkerIndex>> firm_prefs,
                                std::vector<std::vector<FirmIndex>> worker_prefs) const {
    return create(firm_names_, worker_names_, quotas_, std::move(firm_prefs), std::move(worker_prefs));
}

std::optional<FirmIndex> Market::find_firm(std::string_view name) const {
    auto it = std::find(firm_names_.begin(), firm_names_.end(), name);
    if (it == firm_names_.end()) return std::nullopt;
    return static_cast<FirmIndex>(it - firm_names_.begin());
}

std::optional<WorkerIndex> Market::find_worker(std::string_view name) const {
    auto it = std::find(worker_names_.begin(), worker_names_.end(), name);
    if (it == worker_names_.end()) return std::nullopt;
    return static_cast<WorkerIndex>(it - worker_names_.begin());
}

AcceptablePairSet::AcceptablePairSet(const Market& m)
    : num_workers_(m.num_workers()), index_(m.num_firms() * m.num_workers(), kUnranked) {
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
            if (m.acceptable(f, w)) {
                index_[f * num_workers_ + w] = pairs_.size();
                pairs_.push_back({f, w});
            }
        }
    }
}

AcceptablePairSet acceptable_pairs(const Market& m) { return AcceptablePairSet(m); }

Matching::Matching(std::size_t num_firms, std::size_t num_workers)
    : assignment_(num_firms), partner_(num_workers, kUnranked) {}

Matching Matching::from_assignment(const Market& m, std::vector<std::vector<WorkerIndex>> assignment) {
    if (assignment.size() != m.num_firms()) throw InvalidArgument("assignment does not cover every firm");
    Matching mu(m.num_firms(), m.num_workers());
    for (FirmIndex f = 0; f < assignment.size(); ++f) {
        auto& set = assignment[f];
        std::sort(set.begin(), set.end());
        if (set.size() > m.quota(f)) {
            throw InvalidArgument("firm '" + m.firm_name(f) + "' is assigned more workers than its quota");
        }
        for (WorkerIndex w : set) {
            if (w >= m.num_workers()) throw InvalidArgument("assignment names an unknown worker");
            if (mu.partner_[w] != kUnranked) {
                throw InvalidArgument("worker '" + m.worker_name(w) + "' is assigned to more than one firm");
            }
            mu.partner_[w] = f;
        }
    }
    mu.assignment_ = std::move(assignment);
    return mu;
}

std::optional<FirmIndex> Matching::firm_of(WorkerIndex w) const {
    const std::size_t p = partner_.at(w);
    if (p == kUnranked) return std::nullopt;
    return p;
}

FractionalMatching::FractionalMatching(std::size_t num_firms, std::size_t num_workers)
    : num_firms_(num_firms), num_workers_(num_workers), entries_(num_firms * num_workers) {}

FractionalMatching FractionalMatching::from_rows(const std::vector<std::vector<Rational>>& rows) {
    const std::size_t nw = rows.empty() ? 0 : rows.front().size();
    FractionalMatching x(rows.size(), nw);
    for (std::size_t f = 0; f < rows.size(); ++f) {
        if (rows[f].size() != nw) throw InvalidArgument("ragged fractional matching rows");
        for (std::size_t w = 0; w < nw; ++w) x.at(f, w) = rows[f][w];
    }
    return x;
}

std::vector<AcceptablePair> FractionalMatching::support() const {
    std::vector<AcceptablePair> out;
    for (std::size_t f = 0; f < num_firms_; ++f) {
        for (std::size_t w = 0; w < num_workers_; ++w) {
            if (at(f, w).sign() > 0) out.push_back({f, w});
        }
    }
    return out;
}

std::size_t FractionalMatching::support_size() const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [](const Rational& r) { return r.sign() > 0; }));
}

bool FractionalMatching::is_integral() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Rational& r) { return r.is_integer(); });
}

FractionalMatching& FractionalMatching::operator+=(const FractionalMatching& rhs) {
    if (rhs.num_firms_ != num_firms_ || rhs.num_workers_ != num_workers_) {
        throw InvalidArgument("fractional matching dimension mismatch");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
    return *this;
}

FractionalMatching& FractionalMatching::operator-=(const FractionalMatching& rhs) {
    if (rhs.num_firms_ != num_firms_ || rhs.num_workers_ != num_workers_) {
        throw InvalidArgument("fractional matching dimension mismatch");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
    return *this;
}

FractionalMatching& FractionalMatching::operator*=(const Rational& scale) {
    for (auto& e : entries_) e *= scale;
    return *this;
}

FractionalMatching incidence_vector(const Market& m, const Matching& mu) {
    FractionalMatching x(m.num_firms(), m.num_workers());
    for (FirmIndex f = 0; f < mu.num_firms(); ++f) {
        for (WorkerIndex w : mu.workers_of(f)) x.at(f, w) = 1;
    }
    return x;
}

Matching matching_from_incidence(const Market& m, const FractionalMatching& x) {
    if (x.num_firms() != m.num_firms() || x.num_workers() != m.num_workers()) {
        throw InvalidArgument("fractional matching dimensions do not match the market");
    }
    std::vector<std::vector<WorkerIndex>> assignment(m.num_firms());
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
            const Rational& v = x.at(f, w);
            if (v == Rational(1)) {
                assignment[f].push_back(w);
            } else if (!v.is_zero()) {
                throw InvalidArgument("entry (" + m.firm_name(f) + "," + m.worker_name(w) + ") = " + v.str() +
                                      " is not 0 or 1");
            }
        }
    }
    return Matching::from_assignment(m, std::move(assignment));
}

Rational Decomposition::total_weight() const {
    Rational sum;
    for (const auto& t : terms) sum += t.weight;
    return sum;
}

FractionalMatching Decomposition::reconstruct(const Market& m) const {
    FractionalMatching x(m.num_firms(), m.num_workers());
    for (const auto& t : terms) {
        for (FirmIndex f = 0; f < t.matching.num_firms(); ++f) {
            for (WorkerIndex w : t.matching.workers_of(f)) x.at(f, w) += t.weight;
        }
    }
    return x;
}

}  // namespace ssfm
