#include "oracles.hpp"

#include <algorithm>
#include <gmpxx.h>

namespace ssfm::testing {

std::size_t bareiss_rank(const std::vector<std::vector<Rational>>& rows, std::size_t num_cols) {
    std::vector<std::vector<mpz_class>> a;
    for (const auto& row : rows) {
        mpz_class l = 1;
        for (const auto& v : row) l = lcm(l, v.raw().get_den());
        std::vector<mpz_class> r;
        for (const auto& v : row) r.push_back(mpz_class(v.raw().get_num() * (l / v.raw().get_den())));
        a.push_back(std::move(r));
    }
    std::size_t rank = 0;
    mpz_class prev = 1;
    for (std::size_t col = 0; col < num_cols && rank < a.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < a.size() && a[pivot][col] == 0) ++pivot;
        if (pivot == a.size()) continue;
        std::swap(a[pivot], a[rank]);
        for (std::size_t i = rank + 1; i < a.size(); ++i) {
            for (std::size_t j = col + 1; j < num_cols; ++j) {
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
            }
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

namespace {

// Sorted firm ranks of a worker set.
std::vector<std::size_t> ranks(const Market& m, FirmIndex f, const std::vector<WorkerIndex>& set) {
    std::vector<std::size_t> r;
    for (WorkerIndex w : set) r.push_back(m.firm_rank(f, w));
    std::sort(r.begin(), r.end());
    return r;
}

// a is preferred to b (same size): pointwise weakly better, not equal.
bool better_set(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

}  // namespace

bool naive_is_stable(const Market& m, const Matching& mu) {
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        if (mu.workers_of(f).size() > m.quota(f)) return false;
        for (WorkerIndex w : mu.workers_of(f)) {
            if (!m.acceptable(f, w)) return false;
        }
    }
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        const std::vector<WorkerIndex> current(mu.workers_of(f).begin(), mu.workers_of(f).end());
        for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
            if (!m.acceptable(f, w) || mu.employs(f, w)) continue;
            const auto partner = mu.firm_of(w);
            if (partner && !m.worker_prefers(w, f, *partner)) continue;
            if (current.size() < m.quota(f)) return false;
            for (std::size_t drop = 0; drop < current.size(); ++drop) {
                std::vector<WorkerIndex> swapped = current;
                swapped[drop] = w;
                if (better_set(ranks(m, f, swapped), ranks(m, f, current))) return false;
            }
        }
    }
    return true;
}

}  // namespace ssfm::testing
