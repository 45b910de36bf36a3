#include "ssfm/stability.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace ssfm {

namespace {

Matching firm_proposing(const Market& m) {
    const std::size_t nf = m.num_firms();
    const std::size_t nw = m.num_workers();
    std::vector<std::size_t> next(nf, 0);
    std::vector<std::size_t> held(nf, 0);
    std::vector<std::size_t> holder(nw, kUnranked);
    std::deque<FirmIndex> active;
    for (FirmIndex f = 0; f < nf; ++f) active.push_back(f);

    while (!active.empty()) {
        const FirmIndex f = active.front();
        active.pop_front();
        const auto prefs = m.firm_prefs(f);
        while (held[f] < m.quota(f) && next[f] < prefs.size()) {
            const WorkerIndex w = prefs[next[f]++];
            const std::size_t current = holder[w];
            if (current == kUnranked) {
                holder[w] = f;
                ++held[f];
            } else if (m.worker_prefers(w, f, current)) {
                holder[w] = f;
                ++held[f];
                --held[current];
                active.push_back(current);
            }
        }
    }

    std::vector<std::vector<WorkerIndex>> assignment(nf);
    for (WorkerIndex w = 0; w < nw; ++w) {
        if (holder[w] != kUnranked) assignment[holder[w]].push_back(w);
    }
    return Matching::from_assignment(m, std::move(assignment));
}

Matching worker_proposing(const Market& m) {
    const std::size_t nf = m.num_firms();
    const std::size_t nw = m.num_workers();
    std::vector<std::size_t> next(nw, 0);
    std::vector<std::vector<WorkerIndex>> held(nf);
    std::deque<WorkerIndex> free_workers;
    for (WorkerIndex w = 0; w < nw; ++w) free_workers.push_back(w);

    while (!free_workers.empty()) {
        const WorkerIndex w = free_workers.front();
        free_workers.pop_front();
        const auto prefs = m.worker_prefs(w);
        if (next[w] >= prefs.size()) continue;
        const FirmIndex f = prefs[next[w]++];
        auto& pool = held[f];
        pool.push_back(w);
        if (pool.size() > m.quota(f)) {
            auto worst = std::max_element(pool.begin(), pool.end(), [&](WorkerIndex a, WorkerIndex b) {
                return m.firm_rank(f, a) < m.firm_rank(f, b);
            });
            const WorkerIndex rejected = *worst;
            pool.erase(worst);
            free_workers.push_back(rejected);
        }
    }
    return Matching::from_assignment(m, std::move(held));
}

bool worker_prefers_to_current(const Market& m, const Matching& mu, WorkerIndex w, FirmIndex f) {
    const auto current = mu.firm_of(w);
    if (!current) return true;  // f is acceptable, being unmatched is worse
    if (!m.acceptable(*current, w)) return true;
    return m.worker_prefers(w, f, *current);
}

}  // namespace

Matching deferred_acceptance(const Market& m, Side side) {
    return side == Side::Firms ? firm_proposing(m) : worker_proposing(m);
}

bool is_individually_rational(const Market& m, const Matching& mu) {
    if (mu.num_firms() != m.num_firms() || mu.num_workers() != m.num_workers()) return false;
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        const auto set = mu.workers_of(f);
        if (set.size() > m.quota(f)) return false;
        for (WorkerIndex w : set) {
            if (!m.acceptable(f, w)) return false;
        }
    }
    return true;
}

const char* to_string(BlockingPair::Reason r) {
    switch (r) {
        case BlockingPair::Reason::FirmPrefersSwap:
            return "firm-prefers-swap";
        case BlockingPair::Reason::FirmHasVacancy:
            return "firm-has-vacancy";
    }
    return "unknown";
}

std::vector<BlockingPair> blocking_pairs(const Market& m, const Matching& mu) {
    std::vector<BlockingPair> out;
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        const auto set = mu.workers_of(f);
        const bool full = set.size() >= m.quota(f);
        std::size_t worst_rank = 0;
        for (WorkerIndex w : set) worst_rank = std::max(worst_rank, m.firm_rank(f, w));
        for (WorkerIndex w : m.firm_prefs(f)) {
            if (mu.employs(f, w) || !worker_prefers_to_current(m, mu, w, f)) continue;
            if (!full) {
                out.push_back({f, w, BlockingPair::Reason::FirmHasVacancy});
            } else if (m.firm_rank(f, w) < worst_rank) {
                out.push_back({f, w, BlockingPair::Reason::FirmPrefersSwap});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const BlockingPair& a, const BlockingPair& b) {
        return a.firm != b.firm ? a.firm < b.firm : a.worker < b.worker;
    });
    return out;
}

bool is_stable(const Market& m, const Matching& mu) {
    return is_individually_rational(m, mu) && blocking_pairs(m, mu).empty();
}

std::uint64_t candidate_count(const Market& m) {
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 1;
    for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
        const std::uint64_t choices = m.worker_prefs(w).size() + 1;
        if (total > kMax / choices) return kMax;
        total *= choices;
    }
    return total;
}

std::vector<Matching> enumerate_individually_rational(const Market& m, std::uint64_t cap) {
    const std::uint64_t candidates = candidate_count(m);
    if (candidates > cap) {
        throw EnumerationCapExceeded("brute-force enumeration would visit " + std::to_string(candidates) +
                                     " candidate matchings (cap " + std::to_string(cap) + ")");
    }
    const std::size_t nw = m.num_workers();
    std::vector<std::vector<WorkerIndex>> assignment(m.num_firms());
    std::vector<Matching> out;

    // Depth-first over workers; each worker joins an acceptable firm with a
    // free slot or stays unmatched.
    auto recurse = [&](auto&& self, WorkerIndex w) -> void {
        if (w == nw) {
            out.push_back(Matching::from_assignment(m, assignment));
            return;
        }
        self(self, w + 1);
        for (FirmIndex f : m.worker_prefs(w)) {
            if (assignment[f].size() >= m.quota(f)) continue;
            assignment[f].push_back(w);
            self(self, w + 1);
            assignment[f].pop_back();
        }
    };
    recurse(recurse, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Matching> enumerate_stable_bruteforce(const Market& m, std::uint64_t cap) {
    auto all = enumerate_individually_rational(m, cap);
    std::vector<Matching> out;
    for (auto& mu : all) {
        if (blocking_pairs(m, mu).empty()) out.push_back(std::move(mu));
    }
    return out;
}

bool check_rural_hospital(const Market& m, const std::vector<Matching>& stable) {
    if (stable.size() <= 1) return true;
    const Matching& ref = stable.front();
    for (const auto& mu : stable) {
        for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
            if (mu.firm_of(w).has_value() != ref.firm_of(w).has_value()) return false;
        }
        for (FirmIndex f = 0; f < m.num_firms(); ++f) {
            if (mu.workers_of(f).empty() != ref.workers_of(f).empty()) return false;
        }
    }
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        const bool under_somewhere = std::any_of(stable.begin(), stable.end(), [&](const Matching& mu) {
            return mu.workers_of(f).size() < m.quota(f);
        });
        if (!under_somewhere) continue;
        for (const auto& mu : stable) {
            if (!std::ranges::equal(mu.workers_of(f), ref.workers_of(f))) return false;
        }
    }
    return true;
}

}  // namespace ssfm
