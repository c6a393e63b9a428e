#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "khess/errors.hpp"
#include "khess/symfun.hpp"
#include "support/oracles.hpp"
#include "support/cone_properties.hpp"

using namespace khess;

namespace {

std::vector<double> v(std::initializer_list<double> x) { return x; }

}  // namespace

TEST(Binomial, SmallValues) {
    EXPECT_EQ(binomial(5, 2), 10.0);
    EXPECT_EQ(binomial(4, 0), 1.0);
    EXPECT_EQ(binomial(3, 4), 0.0);
    EXPECT_EQ(binomial(3, -1), 0.0);
}

TEST(EigenSpectrum, SortsAndRejectsBadInput) {
    EigenSpectrum s({3.0, -1.0, 2.0});
    EXPECT_EQ(s[0], -1.0);
    EXPECT_EQ(s[2], 3.0);
    EXPECT_EQ(s.max_abs(), 3.0);
    EXPECT_THROW(EigenSpectrum({}), DomainError);
    EXPECT_THROW(EigenSpectrum({1.0, NAN}), DomainError);
}

TEST(SigmaK, HandValues) {
    EXPECT_DOUBLE_EQ(sigma_k(v({1, 1, 1}), 2), 3.0);
    EXPECT_DOUBLE_EQ(sigma_k(v({1, 2, 3}), 2), 11.0);
    EXPECT_DOUBLE_EQ(sigma_k(v({1, 2, 3}), 3), 6.0);
    EXPECT_DOUBLE_EQ(sigma_k(v({-1, 1, 1}), 2), -1.0);
}

TEST(SigmaK, OutOfRangeOrder) {
    EXPECT_THROW(sigma_k(v({1, 2}), 0), DomainError);
    EXPECT_THROW(sigma_k(v({1, 2}), 3), DomainError);
}

TEST(SigmaK, SevenEntriesAgainstSubsets) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(7);
        for (auto& e : x) e = u(rng);
        for (int k = 1; k <= 7; ++k) {
            std::vector<double> ax(x.size());
            std::transform(x.begin(), x.end(), ax.begin(), [](double e) { return std::abs(e); });
            const double scale = oracle::sigma_subsets(ax, k);
            EXPECT_NEAR(sigma_k(x, k), oracle::sigma_subsets(x, k), 1e-12 * scale);
        }
    }
}

TEST(SigmaK, PermutationInvariant) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(6);
        for (auto& e : x) e = u(rng);
        auto y = x;
        std::shuffle(y.begin(), y.end(), rng);
        for (int k = 1; k <= 6; ++k) EXPECT_NEAR(sigma_k(x, k), sigma_k(y, k), 1e-14);
    }
}

TEST(SigmaAll, Examples) {
    auto a = sigma_all(v({1, 1}));
    EXPECT_EQ(a.size(), 2);
    EXPECT_DOUBLE_EQ(a(1), 2.0);
    EXPECT_DOUBLE_EQ(a(2), 1.0);
    EXPECT_DOUBLE_EQ(a(0), 1.0);
    auto z = sigma_all(v({0, 0, 0}));
    for (int j = 1; j <= 3; ++j) EXPECT_EQ(z(j), 0.0);
    auto b = sigma_all(v({1, 2, 3}));
    EXPECT_DOUBLE_EQ(b(1), 6.0);
    EXPECT_DOUBLE_EQ(b(2), 11.0);
    EXPECT_DOUBLE_EQ(b(3), 6.0);
}

TEST(SigmaAll, MatchesSigmaK) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> x(8);
    for (auto& e : x) e = u(rng);
    auto all = sigma_all(x);
    for (int j = 1; j <= 8; ++j) EXPECT_DOUBLE_EQ(all(j), sigma_k(x, j));
}

TEST(GammaK, Examples) {
    EXPECT_TRUE(in_gamma_k(v({-1, 1, 1}), 1, Cone::open));
    EXPECT_FALSE(in_gamma_k(v({-1, 1, 1}), 2, Cone::open));
    for (int n = 1; n <= 6; ++n) {
        std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
        for (int k = 1; k <= n; ++k) EXPECT_TRUE(in_gamma_k(ones, k, Cone::open));
    }
}

TEST(GammaK, ClosedVersusOpenOnBoundary) {
    // sigma_1 = 0
    EXPECT_TRUE(in_gamma_k(v({-1, 1}), 1, Cone::closed));
    EXPECT_FALSE(in_gamma_k(v({-1, 1}), 1, Cone::open));
    // slack admits small negative values only in the closed cone
    EXPECT_TRUE(in_gamma_k(v({-1e-12, 0.0}), 2, Cone::closed, 1e-10));
    EXPECT_FALSE(in_gamma_k(v({-1e-12, 0.0}), 2, Cone::closed));
}

TEST(GammaK, ChainOnRandomPoints) {
    std::mt19937_64 rng(21);
    for (int s = 0; s < 500; ++s) {
        const int n = 2 + s % 6;
        const int k = 1 + s % n;
        const auto x = khess::testing::random_gamma_point(n, k, rng, 0.0, 1e-3);
        ASSERT_TRUE(in_gamma_k(x, k, Cone::open));
        for (int j = 1; j <= k; ++j) EXPECT_TRUE(in_gamma_k(x, j, Cone::open));
    }
}

TEST(GammaK, StrictMonotonicityOfSigma) {
    std::mt19937_64 rng(23);
    for (int s = 0; s < 500; ++s) {
        const int n = 2 + s % 6;
        const int k = 1 + s % n;
        const auto x = khess::testing::random_gamma_point(n, k, rng, 0.0, 1e-3);
        const auto y = khess::testing::random_gamma_point(n, k, rng, 0.0, 1e-3);
        std::vector<double> z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
        EXPECT_GT(sigma_k(z, k), sigma_k(x, k));
    }
}

TEST(Korevaar, Examples) {
    EXPECT_TRUE(in_gamma_k_korevaar(v({1, 1, 1}), 2));
    EXPECT_FALSE(in_gamma_k_korevaar(v({-1, 1, 1}), 2));
    EXPECT_THROW(in_gamma_k_korevaar(v({1, 1}), 3), DomainError);
}

TEST(Korevaar, AgreesOnSmallDimensions) {
    auto t = khess::testing::korevaar_property(10000, 99);
    EXPECT_GT(t.tested, 8000);
    EXPECT_EQ(t.failures, 0);
}

TEST(GardingPolynomial, CoefficientsOfOnes) {
    // sigma_2(t + 1, t + 1, t + 1) = 3 (t + 1)^2
    auto p = garding_polynomial(v({1, 1, 1}), 2);
    ASSERT_EQ(p.size(), 3u);
    EXPECT_DOUBLE_EQ(p[0], 3.0);
    EXPECT_DOUBLE_EQ(p[1], 6.0);
    EXPECT_DOUBLE_EQ(p[2], 3.0);
}

TEST(GardingRoots, Examples) {
    auto r = garding_roots(v({1, 2, 3}), 3);
    ASSERT_EQ(r.size(), 3u);
    std::vector<double> re;
    for (auto z : r) re.push_back(z.real());
    std::sort(re.begin(), re.end());
    EXPECT_NEAR(re[0], -3.0, 1e-10);
    EXPECT_NEAR(re[1], -2.0, 1e-10);
    EXPECT_NEAR(re[2], -1.0, 1e-10);
    EXPECT_TRUE(garding_roots_real(v({1, 2, 3}), 3));
    EXPECT_TRUE(garding_roots_real(v({0, 0}), 2));
}

TEST(GardingRoots, AgreeWithCompanionMatrix) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(4);
        for (auto& e : x) e = u(rng);
        for (int k = 2; k <= 4; ++k) {
            EXPECT_TRUE(garding_roots_real(x, k));
            auto ours = garding_roots(x, k);
            auto ref = oracle::companion_roots(garding_polynomial(x, k));
            std::vector<double> a, b;
            for (auto z : ours) a.push_back(z.real());
            for (auto z : ref) b.push_back(z.real());
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-6);
        }
    }
}

TEST(GardingRoots, LargestRootMarksConeEntry) {
    // lambda + t 1 enters Gamma_k exactly past the largest root.
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(5);
        for (auto& e : x) e = u(rng);
        const int k = 1 + trial % 5;
        double top = -1e300;
        for (auto z : garding_roots(x, k)) top = std::max(top, z.real());
        auto plus = x;
        auto minus = x;
        for (auto& e : plus) e += top + 1e-6;
        for (auto& e : minus) e += top - 1e-6;
        EXPECT_TRUE(in_gamma_k(plus, k, Cone::open));
        EXPECT_FALSE(in_gamma_k(minus, k, Cone::open));
    }
}
