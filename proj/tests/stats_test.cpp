#include "metricfuse/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "metricfuse/rng.hpp"
#include "oracles.hpp"

using namespace metricfuse;

TEST(Pearson, ExactLinearRelations) {
    EXPECT_DOUBLE_EQ(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}), 1.0);
    EXPECT_DOUBLE_EQ(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}), -1.0);
}

TEST(Pearson, HandComputedValue) {
    // Frozen from the covariance-sum oracle: cov=1.0, sx=sy=sqrt(1.25).
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{1, 3, 2, 4};
    EXPECT_NEAR(pearson(x, y), 0.8, 1e-15);
    EXPECT_NEAR(oracles::pearson(x, y), 0.8, 1e-15);
}

TEST(Pearson, RefusesDegenerateAndShortInputs) {
    const std::vector<double> constant{2, 2, 2};
    const std::vector<double> varying{1, 2, 3};
    EXPECT_THROW(
        {
            try {
                pearson(constant, varying);
            } catch (const Error& e) {
                EXPECT_EQ(e.code(), Errc::DegenerateVariance);
                throw;
            }
        },
        Error);
    EXPECT_THROW(
        {
            try {
                pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2});
            } catch (const Error& e) {
                EXPECT_EQ(e.code(), Errc::TooFewPoints);
                throw;
            }
        },
        Error);
}

TEST(Pearson, AffineInvariance) {
    rng::SplitMix64 gen(11);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<double> x;
        for (int i = 0; i < 20; ++i) x.push_back(gen.next_double() * 10.0);
        const double a = 0.5 + gen.next_double() * 3.0;
        const double b = gen.next_double() * 5.0 - 2.5;
        std::vector<double> up;
        std::vector<double> down;
        for (const double v : x) {
            up.push_back(a * v + b);
            down.push_back(-a * v + b);
        }
        EXPECT_NEAR(pearson(x, up), 1.0, 1e-12);
        EXPECT_NEAR(pearson(x, down), -1.0, 1e-12);
    }
}

TEST(Ranks, Examples) {
    EXPECT_EQ(ranks(std::vector<double>{10, 20, 30}), (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(ranks(std::vector<double>{10, 10, 30}), (std::vector<double>{1.5, 1.5, 3}));
    // Three tied values span ranks 2..4, averaging to 3.
    EXPECT_EQ(ranks(std::vector<double>{5, 1, 5, 5}), (std::vector<double>{3, 1, 3, 3}));
}

TEST(Ranks, MatchesQuadraticOracle) {
    rng::SplitMix64 gen(22);
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<double> v;
        const int n = 1 + static_cast<int>(gen.next_below(30));
        for (int i = 0; i < n; ++i) {
            // Coarse grid so ties are common.
            v.push_back(static_cast<double>(gen.next_below(8)));
        }
        EXPECT_EQ(ranks(v), oracles::ranks(v));
    }
}

TEST(Spearman, MonotoneRelations) {
    EXPECT_DOUBLE_EQ(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{10, 100, 1000}),
                     1.0);
    EXPECT_DOUBLE_EQ(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{1000, 100, 10}),
                     -1.0);
}

TEST(Spearman, HandComputedValue) {
    // Tie-free: d^2 sums to 4, so 1 - 6*4 / (5*24) = 0.8.
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{1, 3, 2, 5, 4};
    EXPECT_NEAR(spearman(x, y), 0.8, 1e-15);
    EXPECT_NEAR(oracles::spearman_closed_form(x, y), 0.8, 1e-15);
}

TEST(Spearman, InvariantUnderStrictlyIncreasingTransforms) {
    rng::SplitMix64 gen(33);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<double> x;
        std::vector<double> y;
        for (int i = 0; i < 15; ++i) {
            x.push_back(gen.next_double() * 4.0 - 2.0);
            y.push_back(gen.next_double() * 4.0 - 2.0);
        }
        const double base = spearman(x, y);
        std::vector<double> tx;
        for (const double v : x) tx.push_back(std::exp(v));
        // exp is strictly increasing, so ranks are untouched: exact equality.
        EXPECT_EQ(spearman(tx, y), base);
        EXPECT_EQ(spearman(y, x), base);  // symmetry
    }
}

TEST(Spearman, AgreesWithClosedFormWhenTieFree) {
    rng::SplitMix64 gen(44);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<double> x;
        std::vector<double> y;
        for (int i = 0; i < 12; ++i) {
            x.push_back(gen.next_double());
            y.push_back(gen.next_double());
        }
        EXPECT_NEAR(spearman(x, y), oracles::spearman_closed_form(x, y), 1e-12);
    }
}

TEST(Correlations, OutputsStayWithinUnitInterval) {
    rng::SplitMix64 gen(55);
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<double> x;
        std::vector<double> y;
        const int n = 3 + static_cast<int>(gen.next_below(20));
        for (int i = 0; i < n; ++i) {
            x.push_back(gen.next_double());
            y.push_back(gen.next_double());
        }
        const double rp = pearson(x, y);
        const double rs = spearman(x, y);
        EXPECT_GE(rp, -1.0 - 1e-12);
        EXPECT_LE(rp, 1.0 + 1e-12);
        EXPECT_GE(rs, -1.0 - 1e-12);
        EXPECT_LE(rs, 1.0 + 1e-12);
    }
}
