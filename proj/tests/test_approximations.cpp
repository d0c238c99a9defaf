#include <gtest/gtest.h>

#include <cmath>

#include "consensus/approximations.hpp"
#include "oracles.hpp"

using namespace consensus;

TEST(PooledCompetence, WeightedMean) {
    EXPECT_NEAR(pooled_competence({AgentClass(3, 0.9), AgentClass(2, 0.6)}), 0.78, 1e-15);
    EXPECT_EQ(pooled_competence(Ensemble::homogeneous(5, 0.7)), 0.7);
    EXPECT_NEAR(pooled_competence({AgentClass(1, 0.9), AgentClass(1, 0.5)}), 0.70, 1e-15);
    const auto stats = pooled_competence_stats({AgentClass(3, 0.9), AgentClass(2, 0.6)});
    EXPECT_NEAR(stats.variance, 0.78 * 0.22 / 5.0, 1e-15);
}

TEST(NormalRoute, ExactForSingleClass) {
    for (std::size_t n : {1u, 4u, 5u, 17u, 60u}) {
        for (double p : {0.1, 0.45, 0.7, 0.93}) {
            const auto r = normal_route_consensus(Ensemble::homogeneous(n, p));
            EXPECT_LT(r.abs_error, 1e-12);
            EXPECT_EQ(r.approx_value, r.exact_value);
        }
    }
    const auto r5 = normal_route_consensus(Ensemble::homogeneous(5, 0.7));
    EXPECT_NEAR(r5.approx_value, 0.837, 5e-4);
}

TEST(NormalRoute, MixedEnsembles) {
    const auto a = normal_route_consensus({AgentClass(3, 0.9), AgentClass(2, 0.6)});
    EXPECT_NEAR(a.approx_value, oracle::binomial_upper_tail(5, 0.78, 3), 1e-12);
    EXPECT_NEAR(a.exact_value, oracle::enumerate_consensus(oracle::expand({{3, 0.9}, {2, 0.6}})), 1e-12);
    EXPECT_NEAR(a.abs_error, std::fabs(a.approx_value - a.exact_value), 1e-12);

    const auto b = normal_route_consensus({AgentClass(2, 0.8), AgentClass(1, 0.6)});
    EXPECT_NEAR(b.exact_value, 0.832, 1e-12);
    EXPECT_NEAR(b.approx_value, oracle::binomial_upper_tail(3, 2.2 / 3.0, 2), 1e-12);
    EXPECT_NEAR(b.abs_error, std::fabs(b.approx_value - 0.832), 1e-12);
}

TEST(PoissonRoute, ReferenceValues) {
    const auto ten = poisson_consensus_probability(10, 0.9);
    const double expected = std::exp(-1.0) * (1.0 + 1.0 + 0.5 + 1.0 / 6.0 + 1.0 / 24.0);
    EXPECT_NEAR(ten.approx_value, expected, 1e-14);
    EXPECT_NEAR(ten.approx_value, 0.9963, 5e-5);
    EXPECT_NEAR(ten.exact_value, oracle::binomial_upper_tail(10, 0.9, 6), 1e-12);

    const auto one = poisson_consensus_probability(1, 0.9);
    EXPECT_NEAR(one.approx_value, std::exp(-0.1), 1e-15);
    EXPECT_NEAR(one.exact_value, 0.9, 1e-15);
    EXPECT_NEAR(one.abs_error, std::exp(-0.1) - 0.9, 1e-14);

    const auto nine = poisson_consensus_probability(9, 0.5);
    EXPECT_NEAR(nine.approx_value, oracle::poisson_cdf_direct(4, 4.5), 1e-14);
    EXPECT_NEAR(nine.exact_value, 0.5, 1e-12);
    EXPECT_NEAR(nine.abs_error, std::fabs(nine.approx_value - 0.5), 1e-12);
}

TEST(PoissonRoute, CdfIsMonotoneAndBounded) {
    for (double rate : {0.01, 0.5, 3.0, 40.0, 250.0, 800.0}) {
        double prev = 0.0;
        for (std::size_t k = 0; k < 1200; k += 7) {
            const double v = detail::poisson_cdf(k, rate);
            ASSERT_LE(v, 1.0);
            ASSERT_GE(v, prev);
            prev = v;
        }
    }
}

TEST(PoissonRoute, TailsAreComplementary) {
    for (double rate : {0.05, 1.0, 7.5, 120.0}) {
        for (std::size_t k : {0u, 1u, 5u, 20u, 150u}) {
            EXPECT_NEAR(detail::poisson_cdf(k, rate) + detail::poisson_upper_tail(k, rate), 1.0, 1e-12);
        }
    }
}

TEST(PoissonRoute, ErrorShrinksInRareEventRegime) {
    double prev = 1.0;
    for (std::size_t n : {11u, 21u, 41u, 81u}) {
        const auto r = poisson_consensus_probability(n, 0.99);
        EXPECT_LT(r.abs_error, prev) << "n=" << n;
        EXPECT_GT(r.abs_error, 0.0);
        prev = r.abs_error;
    }
}

TEST(Approximations, PreserveImprovementDirection) {
    // Soft property: with pooled competence above one half, odd groups of at
    // least five beat the pooled competence, within 0.05.
    for (std::size_t n = 5; n <= 41; n += 2) {
        for (double p : {0.6, 0.75, 0.9}) {
            const auto normal = normal_route_consensus({AgentClass(n - 2, p), AgentClass(2, p - 0.05)});
            const double pooled = pooled_competence({AgentClass(n - 2, p), AgentClass(2, p - 0.05)});
            EXPECT_GT(normal.approx_value + 0.05, pooled);
            EXPECT_GT(poisson_consensus_probability(n, p).approx_value + 0.05, p);
        }
    }
}

TEST(PoissonRoute, EnsembleFormUsesEnsembleExactValue) {
    const Ensemble e{AgentClass(2, 0.8), AgentClass(1, 0.6)};
    const auto r = poisson_consensus_probability(e);
    EXPECT_NEAR(r.exact_value, 0.832, 1e-12);
    EXPECT_NEAR(r.approx_value, oracle::poisson_cdf_direct(1, 3.0 * (1.0 - 2.2 / 3.0)), 1e-14);
    EXPECT_NEAR(r.abs_error, std::fabs(r.approx_value - 0.832), 1e-12);

    const auto single = poisson_consensus_probability(Ensemble::homogeneous(10, 0.9));
    const auto direct = poisson_consensus_probability(10, 0.9);
    EXPECT_EQ(single.approx_value, direct.approx_value);
    EXPECT_EQ(single.exact_value, direct.exact_value);
}
