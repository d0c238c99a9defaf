#pragma once

// Pooled-competence (normal route) and Poisson approximations to the
// binomial consensus model. Every approximation is returned next to the
// exact value it stands in for.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "consensus/consensus.hpp"
#include "consensus/detail/binomial_pmf.hpp"
#include "consensus/types.hpp"

namespace consensus {

struct ApproximationReport {
    double approx_value = 0.0;
    double exact_value = 0.0;
    /// |approx_value - exact_value|. Evaluated on the complementary (failure)
    /// tails, where both quantities are small and carry full precision.
    double abs_error = 0.0;
};

struct PooledCompetence {
    double mean = 0.0;      ///< count-weighted mean competence
    double variance = 0.0;  ///< mean * (1 - mean) / n
};

/// Count-weighted mean competence with its companion variance.
inline PooledCompetence pooled_competence_stats(const Ensemble& ensemble) {
    const double n = static_cast<double>(ensemble.total_count());
    double mean = 0.0;
    // Weights are formed first so a single class gives back its competence bit-for-bit.
    for (const auto& c : ensemble.classes()) mean += (static_cast<double>(c.count()) / n) * c.competence();
    return {mean, mean * (1.0 - mean) / n};
}

inline double pooled_competence(const Ensemble& ensemble) {
    return pooled_competence_stats(ensemble).mean;
}

/// Treats the ensemble as one class at the pooled competence and compares
/// against the exact Poisson-binomial result.
inline ApproximationReport normal_route_consensus(const Ensemble& ensemble, VotePolicy policy = {}) {
    const std::size_t n = ensemble.total_count();
    const double pooled = pooled_competence(ensemble);
    ApproximationReport r;
    r.approx_value = consensus_probability(n, pooled, policy);
    r.exact_value = mixed_consensus_probability(ensemble, policy);
    r.abs_error = std::fabs(consensus_failure_probability(n, pooled, policy) -
                            mixed_failure_probability(ensemble, policy));
    return r;
}

namespace detail {

/// Poisson pmf e^-rate rate^k / k!, by log-gamma for large rates where the
/// e^-rate factor alone would underflow.
inline double poisson_pmf(std::size_t k, double rate) {
    const double kd = static_cast<double>(k);
    if (rate > 700.0) return std::exp(-rate + kd * std::log(rate) - std::lgamma(kd + 1.0));
    double term = std::exp(-rate);
    for (std::size_t j = 1; j <= k; ++j) term *= rate / static_cast<double>(j);
    return term;
}

/// P(K <= last) for K ~ Poisson(rate).
inline double poisson_cdf(std::size_t last, double rate) {
    if (rate > 700.0) {
        CompensatedSum sum;
        for (std::size_t k = 0; k <= last; ++k) sum.add(poisson_pmf(k, rate));
        return std::min(sum.value(), 1.0);
    }
    CompensatedSum sum;
    double term = std::exp(-rate);
    sum.add(term);
    for (std::size_t k = 1; k <= last; ++k) {
        term *= rate / static_cast<double>(k);
        sum.add(term);
    }
    return std::min(sum.value(), 1.0);
}

/// P(K > last), summed upward until the terms stop contributing.
inline double poisson_upper_tail(std::size_t last, double rate) {
    const std::size_t first = last + 1;
    if (static_cast<double>(first) <= rate) return std::max(0.0, 1.0 - poisson_cdf(last, rate));
    double term = poisson_pmf(first, rate);
    CompensatedSum sum;
    sum.add(term);
    for (std::size_t k = first + 1;; ++k) {
        term *= rate / static_cast<double>(k);
        if (term == 0.0 || term < 1e-17 * sum.value()) break;
        sum.add(term);
    }
    return std::min(sum.value(), 1.0);
}

}  // namespace detail

/// Models the number of incorrect votes as Poisson with rate n * (1 - p).
/// The consensus is correct when at most n - M votes are wrong.
inline ApproximationReport poisson_consensus_probability(std::size_t n, double p, VotePolicy policy = {}) {
    detail::require(n >= 1, "number of agents must be at least 1");
    detail::require_open_probability(p, "competence");
    const std::size_t m = majority_threshold(n, policy);
    const double rate = static_cast<double>(n) * (1.0 - p);
    const std::size_t allowed_errors = n - m;
    ApproximationReport r;
    r.approx_value = detail::poisson_cdf(allowed_errors, rate);
    r.exact_value = consensus_probability(n, p, policy);
    r.abs_error = std::fabs(detail::poisson_upper_tail(allowed_errors, rate) -
                            consensus_failure_probability(n, p, policy));
    return r;
}

/// Ensemble form: the rate uses the pooled competence, the exact value is the
/// ensemble's own consensus probability.
inline ApproximationReport poisson_consensus_probability(const Ensemble& ensemble, VotePolicy policy = {}) {
    if (ensemble.is_homogeneous()) {
        const auto& c = ensemble.classes().front();
        return poisson_consensus_probability(c.count(), c.competence(), policy);
    }
    const std::size_t n = ensemble.total_count();
    const std::size_t m = majority_threshold(n, policy);
    const double rate = static_cast<double>(n) * (1.0 - pooled_competence(ensemble));
    ApproximationReport r;
    r.approx_value = detail::poisson_cdf(n - m, rate);
    r.exact_value = mixed_consensus_probability(ensemble, policy);
    r.abs_error = std::fabs(detail::poisson_upper_tail(n - m, rate) - mixed_failure_probability(ensemble, policy));
    return r;
}

}  // namespace consensus
