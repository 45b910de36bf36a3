#include <gtest/gtest.h>

#include "corpus.hpp"
#include "ssfm/characterize.hpp"
#include "ssfm/stability.hpp"
#include "ssfm/strongstab.hpp"

using namespace ssfm;
using ssfm::testing::two_by_four;

namespace {

FractionalMatching frac(const Market& m, const char* text) { return parse_fractional(m, text); }

const char* kX1 = "1 1/2 1/2 0\n0 1/2 1/2 1\n";
const char* kMid = "1 1/2 0 1/2\n0 1/2 1 1/2\n";
const char* kMuF = "1 1 0 0\n0 0 1 1\n";
const char* kMuW = "1 0 0 1\n0 1 1 0\n";

bool weakly(Dominance d) { return d == Dominance::WeaklyDominates || d == Dominance::StronglyDominates; }

// Strongly stable points drawn from the hull around every stable matching.
std::vector<FractionalMatching> strongly_stable_points(const Market& m, std::uint64_t seed, std::size_t per) {
    std::vector<FractionalMatching> out;
    for (const auto& mu : enumerate_stable_bruteforce(m)) {
        for (auto& x : sample_hull(m, mu, seed++, per)) out.push_back(std::move(x));
    }
    return out;
}

}  // namespace

TEST(StrongStability, FractionalExampleFailsAtOnePair) {
    const Market m = two_by_four();
    const auto r = strong_stability_check(m, frac(m, kX1));
    EXPECT_FALSE(r.overall);
    ASSERT_EQ(r.pairs.size(), 8u);
    std::size_t failing = 0;
    for (const auto& p : r.pairs) {
        if (!p.product.is_zero()) ++failing;
    }
    EXPECT_EQ(failing, 1u);
    const auto* w = r.first_failure();
    ASSERT_NE(w, nullptr);
    EXPECT_EQ(w->firm, 1u);
    EXPECT_EQ(w->worker, 2u);
    EXPECT_EQ(w->firm_factor, Rational(1, 2));
    EXPECT_EQ(w->worker_factor, Rational(1, 2));
    EXPECT_EQ(w->product, Rational(1, 4));
}

TEST(StrongStability, StableAndMidpointPass) {
    const Market m = two_by_four();
    for (const char* t : {kMid, kMuF, kMuW}) {
        const auto r = strong_stability_check(m, frac(m, t));
        EXPECT_TRUE(r.overall) << t;
        EXPECT_EQ(r.first_failure(), nullptr);
    }
}

TEST(StrongStability, CheckRequiresScpButEvaluateDoesNot) {
    const Market m = two_by_four();
    const FractionalMatching zero(2, 4);
    EXPECT_THROW((void)strong_stability_check(m, zero), InfeasiblePoint);
    const auto r = evaluate_strong_stability(m, zero);
    EXPECT_FALSE(r.overall);
    EXPECT_EQ(r.pairs.front().firm_factor, Rational(2));
    EXPECT_EQ(r.pairs.front().worker_factor, Rational(1));
}

TEST(MuOfX, PicksTopSupportedWorkers) {
    const Market m = two_by_four();
    const Matching mu_f = Matching::from_assignment(m, {{0, 1}, {2, 3}});
    EXPECT_EQ(mu_of_x(m, frac(m, kX1)), mu_f);
    EXPECT_EQ(mu_of_x(m, frac(m, kMid)), mu_f);
    EXPECT_EQ(mu_of_x(m, frac(m, kMuW)), Matching::from_assignment(m, {{0, 3}, {1, 2}}));
}

TEST(MuOfX, ReportsContestedWorker) {
    const Market m = Market::create({"f1", "f2"}, {"w1"}, {1, 1}, {{0}, {0}}, {{0, 1}});
    const auto x = FractionalMatching::from_rows({{Rational(1, 2)}, {Rational(1, 2)}});
    try {
        (void)mu_of_x(m, x);
        FAIL();
    } catch (const ContestedWorker& e) {
        EXPECT_EQ(e.worker(), 0u);
        EXPECT_EQ(e.first_firm(), 0u);
        EXPECT_EQ(e.second_firm(), 1u);
    }
}

TEST(Peel, MidpointSplitsInHalf) {
    const Market m = two_by_four();
    const PeelStep p = peel(m, frac(m, kMid));
    EXPECT_EQ(p.alpha, Rational(1, 2));
    EXPECT_EQ(p.matching, Matching::from_assignment(m, {{0, 1}, {2, 3}}));
    EXPECT_EQ(p.residual, frac(m, kMuW));
}

TEST(Peel, RefusesIntegerAndNonStronglyStablePoints) {
    const Market m = two_by_four();
    EXPECT_THROW((void)peel(m, frac(m, kMuF)), InvalidArgument);
    try {
        (void)peel(m, frac(m, kX1));
        FAIL();
    } catch (const NotStronglyStable& e) {
        EXPECT_EQ(e.witness().product, Rational(1, 4));
    }
}

TEST(Decompose, ExamplePoints) {
    const Market m = two_by_four();
    const Decomposition d = decompose(m, frac(m, kMid));
    ASSERT_EQ(d.terms.size(), 2u);
    EXPECT_EQ(d.terms[0].matching, Matching::from_assignment(m, {{0, 1}, {2, 3}}));
    EXPECT_EQ(d.terms[0].weight, Rational(1, 2));
    EXPECT_EQ(d.terms[1].matching, Matching::from_assignment(m, {{0, 3}, {1, 2}}));
    EXPECT_EQ(d.terms[1].weight, Rational(1, 2));

    const Decomposition single = decompose(m, frac(m, kMuW));
    ASSERT_EQ(single.terms.size(), 1u);
    EXPECT_EQ(single.terms[0].weight, Rational(1));
    EXPECT_THROW((void)decompose(m, frac(m, kX1)), NotStronglyStable);
}

TEST(Decompose, UnevenWeightsOnTwoByFour) {
    const Market m = two_by_four();
    const auto x = frac(m, "1 1/3 0 2/3\n0 2/3 1 1/3\n");
    const Decomposition d = decompose(m, x);
    ASSERT_EQ(d.terms.size(), 2u);
    EXPECT_EQ(d.terms[0].weight, Rational(1, 3));
    EXPECT_EQ(d.terms[1].weight, Rational(2, 3));
}

TEST(Dominance, ExampleMatchings) {
    const Market m = two_by_four();
    const auto xf = frac(m, kMuF);
    const auto xw = frac(m, kMuW);
    const auto mid = frac(m, kMid);
    EXPECT_EQ(side_dominance(m, xf, xw, Side::Firms), Dominance::StronglyDominates);
    EXPECT_EQ(side_dominance(m, xf, xw, Side::Workers), Dominance::Dominated);
    EXPECT_EQ(side_dominance(m, xf, xf, Side::Firms), Dominance::WeaklyDominates);
    EXPECT_EQ(dominance_compare(m, mid, xw, Agent::firm(0)), Dominance::StronglyDominates);
    EXPECT_EQ(dominance_compare(m, mid, xw, Agent::worker(0)), Dominance::WeaklyDominates);
    EXPECT_STREQ(to_string(Dominance::Incomparable), "incomparable");
}

TEST(Dominance, IncomparableWhenPrefixesCross) {
    const Market m = two_by_four();
    // f1 list w1 w2 w3 w4: x has {w1, w4}, y has {w2, w3}.
    const auto x = frac(m, "1 0 0 1\n0 0 0 0\n");
    const auto y = frac(m, "0 1 1 0\n0 0 0 0\n");
    EXPECT_EQ(dominance_compare(m, x, y, Agent::firm(0)), Dominance::Incomparable);
    EXPECT_EQ(side_dominance(m, x, y, Side::Firms), Dominance::Incomparable);
}

TEST(AlmostIntegral, Examples) {
    const Market m = two_by_four();
    EXPECT_TRUE(check_almost_integral(m, frac(m, kMid)));
    EXPECT_TRUE(check_almost_integral(m, frac(m, kMuF)));
    // Almost-integral without being strongly stable.
    EXPECT_TRUE(check_almost_integral(m, frac(m, kX1)));
    EXPECT_FALSE(check_almost_integral(m, frac(m, "1/2 0 0 0\n0 0 0 0\n")));
    EXPECT_FALSE(check_almost_integral(m, frac(m, "1/3 1/3 1/3 0\n0 0 0 0\n")));

    const Market three = Market::create({"f1", "f2", "f3"}, {"w1"}, {1, 1, 1}, {{0}, {0}, {0}}, {{0, 1, 2}});
    const auto column = FractionalMatching::from_rows({{Rational(1, 3)}, {Rational(1, 3)}, {Rational(1, 3)}});
    EXPECT_FALSE(check_almost_integral(three, column));
}

TEST(StrongStability, StableMatchingsPassOnCorpus) {
    for (const auto& e : ssfm::testing::full_corpus()) {
        const Market m = e.market();
        for (const auto& mu : enumerate_stable_bruteforce(m)) {
            EXPECT_TRUE(strong_stability_check(m, incidence_vector(m, mu)).overall) << e.label();
        }
    }
}

TEST(StrongStability, PropertiesOfSampledPoints) {
    for (const auto& e : ssfm::testing::rich_corpus()) {
        const Market m = e.market();
        const auto xf = incidence_vector(m, deferred_acceptance(m, Side::Firms));
        const auto xw = incidence_vector(m, deferred_acceptance(m, Side::Workers));
        for (const auto& x : strongly_stable_points(m, e.seed, 5)) {
            ASSERT_TRUE(strong_stability_check(m, x).overall) << e.label();
            const Matching mu = mu_of_x(m, x);
            EXPECT_TRUE(is_stable(m, mu)) << e.label();
            EXPECT_TRUE(check_almost_integral(m, x)) << e.label();
            for (FirmIndex f = 0; f < m.num_firms(); ++f) {
                EXPECT_TRUE(weakly(dominance_compare(m, xf, x, Agent::firm(f)))) << e.label();
                EXPECT_TRUE(weakly(dominance_compare(m, x, xw, Agent::firm(f)))) << e.label();
            }
            for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
                EXPECT_TRUE(weakly(dominance_compare(m, xw, x, Agent::worker(w)))) << e.label();
                EXPECT_TRUE(weakly(dominance_compare(m, x, xf, Agent::worker(w)))) << e.label();
            }
            if (x != incidence_vector(m, mu)) {
                const PeelStep p = peel(m, x);
                EXPECT_TRUE(strong_stability_check(m, p.residual).overall) << e.label();
                EXPECT_LT(p.residual.support_size(), x.support_size()) << e.label();
            }
            const Decomposition d = decompose(m, x);
            EXPECT_EQ(d.reconstruct(m), x) << e.label();
            EXPECT_EQ(d.total_weight(), Rational(1)) << e.label();
            for (std::size_t l = 0; l + 1 < d.terms.size(); ++l) {
                EXPECT_EQ(side_dominance(m, incidence_vector(m, d.terms[l].matching),
                                         incidence_vector(m, d.terms[l + 1].matching), Side::Firms),
                          Dominance::StronglyDominates)
                    << e.label();
            }
        }
    }
}
