#include "ssfm/rotations.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "ssfm/stability.hpp"

namespace ssfm {

namespace {

using Lists = std::vector<std::vector<std::size_t>>;

template <typename Keep>
void filter(std::vector<std::size_t>& list, Keep keep) {
    std::erase_if(list, [&](std::size_t x) { return !keep(x); });
}

// Rank of the best (smallest rank) and worst worker of f under mu.
std::pair<std::size_t, std::size_t> rank_bounds(const Market& m, const Matching& mu, FirmIndex f) {
    std::size_t best = kUnranked;
    std::size_t worst = 0;
    for (WorkerIndex w : mu.workers_of(f)) {
        best = std::min(best, m.firm_rank(f, w));
        worst = std::max(worst, m.firm_rank(f, w));
    }
    return {best, worst};
}

Rotation canonical(std::vector<FirmIndex> firms, std::vector<WorkerIndex> workers) {
    const auto start = static_cast<std::ptrdiff_t>(std::min_element(firms.begin(), firms.end()) - firms.begin());
    std::rotate(firms.begin(), firms.begin() + start, firms.end());
    std::rotate(workers.begin(), workers.begin() + start, workers.end());
    return {std::move(firms), std::move(workers)};
}

// No validation; callers guarantee sigma is a rotation at mu.
Matching apply_unchecked(const Market& m, const Matching& mu, const Rotation& sigma) {
    auto assignment = mu.assignment();
    const std::size_t r = sigma.size();
    for (std::size_t d = 0; d < r; ++d) {
        const FirmIndex f = sigma.firms[d];
        const WorkerIndex leaving = sigma.workers[(d + r - 1) % r];
        auto& set = assignment[f];
        std::erase(set, leaving);
        set.push_back(sigma.workers[d]);
    }
    return Matching::from_assignment(m, std::move(assignment));
}

}  // namespace

bool Rotation::contains_firm(FirmIndex f) const { return std::find(firms.begin(), firms.end(), f) != firms.end(); }

std::string to_string(const Market& m, const Rotation& r) {
    std::string out = "(";
    for (std::size_t d = 0; d < r.size(); ++d) {
        if (d > 0) out += ' ';
        out += m.firm_name(r.firms[d]) + ">" + m.worker_name(r.workers[d]);
    }
    return out + ")";
}

ReducedProfile reduce_profile(const Market& m, const Matching& mu, ReductionMode mode) {
    if (!is_stable(m, mu)) throw InvalidArgument("reduce_profile requires a stable matching");
    const Matching worker_opt = deferred_acceptance(m, Side::Workers);
    const Matching& top = mode == ReductionMode::AtMatching ? mu : deferred_acceptance(m, Side::Firms);
    const Matching& bottom = worker_opt;

    Lists firm_lists(m.num_firms());
    Lists worker_lists(m.num_workers());
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        const auto p = m.firm_prefs(f);
        firm_lists[f].assign(p.begin(), p.end());
    }
    for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
        const auto p = m.worker_prefs(w);
        worker_lists[w].assign(p.begin(), p.end());
    }

    // Nothing above the top reference for firms, nothing below the bottom reference for workers.
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        if (top.workers_of(f).empty()) {
            firm_lists[f].clear();
            continue;
        }
        const std::size_t best = rank_bounds(m, top, f).first;
        filter(firm_lists[f], [&](WorkerIndex w) { return m.firm_rank(f, w) >= best; });
    }
    for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
        const auto partner = bottom.firm_of(w);
        if (!partner) {
            worker_lists[w].clear();
            continue;
        }
        const std::size_t limit = m.worker_rank(w, *partner);
        filter(worker_lists[w], [&](FirmIndex f) { return m.worker_rank(w, f) >= limit; });
    }

    // Nothing above the top reference for workers, nothing below the bottom reference for firms.
    for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
        const auto partner = top.firm_of(w);
        if (!partner) continue;
        const std::size_t limit = m.worker_rank(w, *partner);
        filter(worker_lists[w], [&](FirmIndex f) { return m.worker_rank(w, f) <= limit; });
    }
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        if (bottom.workers_of(f).empty()) continue;
        const std::size_t worst = rank_bounds(m, bottom, f).second;
        filter(firm_lists[f], [&](WorkerIndex w) { return m.firm_rank(f, w) <= worst; });
    }

    // Drop one-sided entries until both sides agree.
    for (bool changed = true; changed;) {
        changed = false;
        for (FirmIndex f = 0; f < m.num_firms(); ++f) {
            const std::size_t before = firm_lists[f].size();
            filter(firm_lists[f], [&](WorkerIndex w) {
                return std::find(worker_lists[w].begin(), worker_lists[w].end(), f) != worker_lists[w].end();
            });
            changed |= before != firm_lists[f].size();
        }
        for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
            const std::size_t before = worker_lists[w].size();
            filter(worker_lists[w], [&](FirmIndex f) {
                return std::find(firm_lists[f].begin(), firm_lists[f].end(), w) != firm_lists[f].end();
            });
            changed |= before != worker_lists[w].size();
        }
    }

    return {mu, m.with_preferences(std::move(firm_lists), std::move(worker_lists))};
}

RotationSet find_cycles(const ReducedProfile& rp) {
    const Market& m = rp.market;
    const Matching& mu = rp.base;
    const std::size_t nf = m.num_firms();

    std::vector<std::size_t> succ(nf, kUnranked);
    std::vector<WorkerIndex> label(nf, kUnranked);
    for (FirmIndex f = 0; f < nf; ++f) {
        if (mu.workers_of(f).size() < m.quota(f)) continue;
        for (WorkerIndex w : m.firm_prefs(f)) {
            if (mu.employs(f, w)) continue;
            if (const auto holder = mu.firm_of(w)) {
                succ[f] = *holder;
                label[f] = w;
            }
            break;
        }
    }

    RotationSet out;
    constexpr std::size_t kFresh = kUnranked;
    std::vector<std::size_t> stamp(nf, kFresh);
    for (FirmIndex start = 0; start < nf; ++start) {
        if (stamp[start] != kFresh) continue;
        std::vector<FirmIndex> path;
        std::size_t cur = start;
        while (cur != kUnranked && stamp[cur] == kFresh) {
            stamp[cur] = start;
            path.push_back(cur);
            cur = succ[cur];
        }
        if (cur == kUnranked || stamp[cur] != start) continue;
        const auto first = std::find(path.begin(), path.end(), cur);
        std::vector<FirmIndex> firms(first, path.end());
        std::vector<WorkerIndex> workers;
        for (FirmIndex f : firms) workers.push_back(label[f]);
        out.push_back(canonical(std::move(firms), std::move(workers)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

RotationSet rotations_at(const Market& m, const Matching& mu) { return find_cycles(reduce_profile(m, mu)); }

Matching apply_cycle(const Market& m, const Matching& mu, const Rotation& sigma) {
    const RotationSet phi = rotations_at(m, mu);
    if (std::find(phi.begin(), phi.end(), sigma) == phi.end()) {
        throw InvalidArgument("rotation " + to_string(m, sigma) + " is not exposed at " + to_string(m, mu));
    }
    return apply_unchecked(m, mu, sigma);
}

Matching apply_cycle_set(const Market& m, const Matching& mu, std::span<const Rotation> rotations) {
    if (rotations.empty()) return mu;
    const RotationSet phi = rotations_at(m, mu);
    std::vector<bool> used(m.num_firms(), false);
    Matching out = mu;
    for (const auto& sigma : rotations) {
        if (std::find(phi.begin(), phi.end(), sigma) == phi.end()) {
            throw InvalidArgument("rotation " + to_string(m, sigma) + " is not exposed at " + to_string(m, mu));
        }
        for (FirmIndex f : sigma.firms) {
            if (used[f]) throw InvalidArgument("rotations in a set must be firm-disjoint");
            used[f] = true;
        }
        // Disjoint rotations touch disjoint firm rows, so applying them one
        // after another to the running result is the same as per-firm union.
        out = apply_unchecked(m, out, sigma);
    }
    return out;
}

std::vector<Matching> connected_set(const Market& m, const Matching& mu, std::span<const Rotation> kprime) {
    if (kprime.size() >= 20) throw InvalidArgument("connected set too large to materialise");
    const std::size_t count = std::size_t{1} << kprime.size();
    std::vector<Matching> out;
    out.reserve(count);
    std::vector<Rotation> chosen;
    for (std::size_t mask = 0; mask < count; ++mask) {
        chosen.clear();
        for (std::size_t i = 0; i < kprime.size(); ++i) {
            if ((mask >> i) & 1U) chosen.push_back(kprime[i]);
        }
        out.push_back(apply_cycle_set(m, mu, chosen));
    }
    return out;
}

std::vector<Matching> enumerate_stable_via_rotations(const Market& m) {
    std::set<Matching> seen;
    std::deque<Matching> frontier;
    Matching top = deferred_acceptance(m, Side::Firms);
    seen.insert(top);
    frontier.push_back(std::move(top));
    while (!frontier.empty()) {
        const Matching mu = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& sigma : rotations_at(m, mu)) {
            Matching next = apply_unchecked(m, mu, sigma);
            if (seen.insert(next).second) frontier.push_back(std::move(next));
        }
    }
    return {seen.begin(), seen.end()};
}

}  // namespace ssfm
