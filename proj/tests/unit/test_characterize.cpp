#include <gtest/gtest.h>

#include <variant>

#include "corpus.hpp"
#include "ssfm/characterize.hpp"
#include "ssfm/polytope.hpp"
#include "ssfm/stability.hpp"

using namespace ssfm;
using ssfm::testing::two_by_four;

namespace {

FractionalMatching frac(const Market& m, const char* text) { return parse_fractional(m, text); }

const char* kX1 = "1 1/2 1/2 0\n0 1/2 1/2 1\n";
const char* kMid = "1 1/2 0 1/2\n0 1/2 1 1/2\n";
const char* kMuF = "1 1 0 0\n0 0 1 1\n";
const char* kMuW = "1 0 0 1\n0 1 1 0\n";

}  // namespace

TEST(Certify, MidpointHasTwoTerms) {
    const Market m = two_by_four();
    const Certification c = certify_strongly_stable(m, frac(m, kMid));
    const auto* cert = std::get_if<HullCertificate>(&c);
    ASSERT_NE(cert, nullptr);
    EXPECT_EQ(cert->base, deferred_acceptance(m, Side::Firms));
    ASSERT_EQ(cert->rotations.size(), 1u);
    ASSERT_EQ(cert->terms.size(), 2u);
    EXPECT_TRUE(cert->terms[0].rotation_ids.empty());
    EXPECT_EQ(cert->terms[0].weight, Rational(1, 2));
    EXPECT_EQ(cert->terms[1].rotation_ids, std::vector<std::size_t>{0});
    EXPECT_EQ(cert->terms[1].weight, Rational(1, 2));
    EXPECT_EQ(cert->reconstruct(m), frac(m, kMid));
}

TEST(Certify, FractionalVertexIsRefused) {
    const Market m = two_by_four();
    const Certification c = certify_strongly_stable(m, frac(m, kX1));
    const auto* r = std::get_if<Refusal>(&c);
    ASSERT_NE(r, nullptr);
    EXPECT_EQ(r->witness.firm, 1u);
    EXPECT_EQ(r->witness.worker, 2u);
    EXPECT_EQ(r->witness.product, Rational(1, 4));
}

TEST(Certify, IntegerPointIsItsOwnBase) {
    const Market m = two_by_four();
    const Certification c = certify_strongly_stable(m, frac(m, kMuW));
    const auto* cert = std::get_if<HullCertificate>(&c);
    ASSERT_NE(cert, nullptr);
    EXPECT_EQ(cert->base, deferred_acceptance(m, Side::Workers));
    ASSERT_EQ(cert->terms.size(), 1u);
    EXPECT_TRUE(cert->terms[0].rotation_ids.empty());
    EXPECT_EQ(cert->terms[0].weight, Rational(1));
}

TEST(Certify, RequiresScpFeasibility) {
    const Market m = two_by_four();
    EXPECT_THROW((void)certify_strongly_stable(m, FractionalMatching(2, 4)), InfeasiblePoint);
}

TEST(HullMembership, TwoByFourSegment) {
    const Market m = two_by_four();
    const Matching mu_f = deferred_acceptance(m, Side::Firms);
    const Matching mu_w = deferred_acceptance(m, Side::Workers);
    EXPECT_TRUE(hull_membership(m, mu_f, frac(m, kMid)));
    EXPECT_TRUE(hull_membership(m, mu_f, frac(m, kMuF)));
    EXPECT_TRUE(hull_membership(m, mu_f, frac(m, kMuW)));
    EXPECT_FALSE(hull_membership(m, mu_f, frac(m, kX1)));
    EXPECT_FALSE(hull_membership(m, mu_w, frac(m, kMid)));
    EXPECT_TRUE(hull_membership(m, mu_w, frac(m, kMuW)));
    // Past the segment end.
    const auto beyond = Rational(3, 2) * frac(m, kMuW) - Rational(1, 2) * frac(m, kMuF);
    EXPECT_FALSE(hull_membership(m, mu_f, beyond));
}

TEST(SampleHull, PointsOnTheSegment) {
    const Market m = two_by_four();
    const Matching mu_f = deferred_acceptance(m, Side::Firms);
    const auto xf = frac(m, kMuF);
    const auto xw = frac(m, kMuW);
    EXPECT_TRUE(sample_hull(m, mu_f, 3, 0).empty());
    const auto pts = sample_hull(m, mu_f, 3, 50);
    ASSERT_EQ(pts.size(), 50u);
    for (const auto& x : pts) {
        const Rational lambda = x.at(0, 3);
        EXPECT_EQ(x, (Rational(1) - lambda) * xf + lambda * xw);
        EXPECT_TRUE(strong_stability_check(m, x).overall);
    }
    EXPECT_EQ(sample_hull(m, mu_f, 3, 50), pts);
    EXPECT_NE(sample_hull(m, mu_f, 4, 50), pts);
}

// Two independent routes must agree: certify through decomposition, and
// the per-rotation segment test.
TEST(HullMembership, AgreesWithCertificateBase) {
    for (const auto& e : ssfm::testing::rich_corpus()) {
        const Market m = e.market();
        const auto stable = enumerate_stable_bruteforce(m);
        for (const auto& mu : stable) {
            for (const auto& x : sample_hull(m, mu, e.seed, 10)) {
                EXPECT_TRUE(hull_membership(m, mu, x)) << e.label();
                const Certification c = certify_strongly_stable(m, x);
                const auto* cert = std::get_if<HullCertificate>(&c);
                ASSERT_NE(cert, nullptr) << e.label();
                EXPECT_TRUE(hull_membership(m, cert->base, x)) << e.label();
                EXPECT_EQ(cert->reconstruct(m), x);
            }
        }
    }
}

TEST(WalkToVertex, EndsAtVerticesOfTwoByFour) {
    const Market m = two_by_four();
    Rng rng(5);
    const auto start = Rational(1, 3) * (frac(m, kMid) + frac(m, kMid) + frac(m, kX1));
    bool saw_fractional = false;
    for (int i = 0; i < 40; ++i) {
        const auto v = walk_to_vertex(m, start, rng);
        EXPECT_TRUE(is_extreme_point(m, v).is_vertex);
        if (!v.is_integral()) {
            saw_fractional = true;
            EXPECT_EQ(v, frac(m, kX1));
        }
    }
    EXPECT_TRUE(saw_fractional);
}

TEST(Rng, BoundedDrawsStayInRange) {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const auto v = rng.between(-2, 3);
        EXPECT_GE(v, -2);
        EXPECT_LE(v, 3);
        EXPECT_LT(rng.below(7), 7u);
    }
    EXPECT_THROW((void)rng.below(0), InvalidArgument);
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(a.below(1000), b.below(1000));
}

TEST(GenRandomMarket, DeterministicAndBounded) {
    EXPECT_EQ(gen_random_market(9, 3, 5, 2), gen_random_market(9, 3, 5, 2));
    EXPECT_EQ(gen_random_market(9, 3, 5, 2, ListDraw::Complete), gen_random_market(9, 3, 5, 2, ListDraw::Complete));
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Market m = gen_random_market(s, 3, 5, 2);
        EXPECT_EQ(m.num_firms(), 3u);
        EXPECT_EQ(m.num_workers(), 5u);
        for (FirmIndex f = 0; f < 3; ++f) {
            EXPECT_GE(m.quota(f), 1u);
            EXPECT_LE(m.quota(f), 2u);
        }
        EXPECT_LE(acceptable_pairs(gen_random_market(s, 1, 1, 1)).size(), 1u);
        const Market full = gen_random_market(s, 3, 5, 2, ListDraw::Complete);
        EXPECT_EQ(acceptable_pairs(full).size(), 15u);
    }
    EXPECT_EQ(gen_random_market(3, 2, 4, 2).firm_name(1), "f2");
    EXPECT_THROW((void)gen_random_market(1, 0, 2, 1), InvalidArgument);
}

TEST(VerifyCharacterization, TwoByFour) {
    const Market m = two_by_four();
    const CharacterizationReport r = verify_characterization(m, 1, 200);
    EXPECT_TRUE(r.ok()) << r.counterexamples.front();
    EXPECT_EQ(r.stable_matchings, 2u);
    EXPECT_EQ(r.hull_samples, 200u);
    EXPECT_GT(r.candidates_outside, 0u);
    EXPECT_GT(r.fractional_vertices, 0u);
}

TEST(VerifyCharacterization, SingleStableMatching) {
    const Market m = Market::create({"f1", "f2"}, {"w1", "w2"}, {1, 1}, {{0, 1}, {0, 1}}, {{0, 1}, {0, 1}});
    ASSERT_EQ(enumerate_stable_bruteforce(m).size(), 1u);
    const CharacterizationReport r = verify_characterization(m, 2, 50);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.stable_matchings, 1u);
    // Here SCP is the single stable point.
    EXPECT_EQ(r.candidates_outside, 0u);

    const Market wide = gen_random_market(5, 3, 3, 3);
    ASSERT_EQ(enumerate_stable_bruteforce(wide).size(), 1u);
    const CharacterizationReport w = verify_characterization(wide, 5, 100);
    EXPECT_TRUE(w.ok());
    EXPECT_GT(w.candidates_outside, 0u);
}

TEST(VerifyCharacterization, SubsetGeneratorMarkets) {
    for (const auto& e : ssfm::testing::full_corpus()) {
        if (e.draw != ListDraw::Subset) continue;
        const CharacterizationReport r = verify_characterization(e.market(), e.seed, 30);
        EXPECT_TRUE(r.ok()) << e.label() << ": " << r.counterexamples.front();
    }
}
