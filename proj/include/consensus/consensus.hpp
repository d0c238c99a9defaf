#pragma once

// Exact probability that a quorum vote of independent agents is correct.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "consensus/detail/binomial_pmf.hpp"
#include "consensus/error.hpp"
#include "consensus/types.hpp"

namespace consensus {

/// Minimum number of agreeing votes out of n that establishes a consensus.
///
/// Returns floor(quorum * n) + 1. Products within 1e-9 of an integer are
/// snapped to it so that e.g. quorum = 2/3 with n = 9 yields 7, not 6.
inline std::size_t majority_threshold(std::size_t n, VotePolicy policy = {}) {
    detail::require(n >= 1, "number of agents must be at least 1");
    const double scaled = policy.quorum() * static_cast<double>(n);
    const auto threshold = static_cast<std::size_t>(std::floor(scaled + 1e-9)) + 1;
    if (threshold > n) {
        throw NoQuorumError("quorum " + std::to_string(policy.quorum()) +
                            " cannot be reached by " + std::to_string(n) + " agents");
    }
    return threshold;
}

/// P(at least M of n agents are correct), M = majority_threshold(n, policy).
inline double consensus_probability(std::size_t n, double p, VotePolicy policy = {}) {
    detail::require(n >= 1, "number of agents must be at least 1");
    detail::require_open_probability(p, "competence");
    const std::size_t m = majority_threshold(n, policy);
    const double q = 1.0 - p;
    detail::CompensatedSum sum;
    // Smallest terms first.
    for (std::size_t k = n + 1; k-- > m;) sum.add(detail::binomial_pmf(k, n, p, q));
    return std::clamp(sum.value(), 0.0, 1.0);
}

/// 1 - consensus_probability, summed directly over the lower tail so that
/// values near zero keep full relative precision.
inline double consensus_failure_probability(std::size_t n, double p, VotePolicy policy = {}) {
    detail::require(n >= 1, "number of agents must be at least 1");
    detail::require_open_probability(p, "competence");
    const std::size_t m = majority_threshold(n, policy);
    const double q = 1.0 - p;
    detail::CompensatedSum sum;
    for (std::size_t k = 0; k < m; ++k) sum.add(detail::binomial_pmf(k, n, p, q));
    return std::clamp(sum.value(), 0.0, 1.0);
}

/// Poisson-binomial distribution of the number of correct votes, built one
/// agent at a time. Adding an agent is O(current size).
class VoteDistributionBuilder {
public:
    VoteDistributionBuilder() : probabilities_{1.0} {}

    void add_agent(double competence) {
        detail::require_open_probability(competence, "competence");
        const double miss = 1.0 - competence;
        probabilities_.push_back(0.0);
        for (std::size_t k = probabilities_.size() - 1; k > 0; --k) {
            probabilities_[k] = probabilities_[k] * miss + probabilities_[k - 1] * competence;
        }
        probabilities_[0] *= miss;
    }

    void add_class(const AgentClass& c) {
        for (std::size_t i = 0; i < c.count(); ++i) add_agent(c.competence());
    }

    std::size_t total_count() const noexcept { return probabilities_.size() - 1; }

    /// P(correct votes >= threshold).
    double upper_tail(std::size_t threshold) const {
        detail::CompensatedSum sum;
        for (std::size_t k = probabilities_.size(); k-- > threshold;) sum.add(probabilities_[k]);
        return std::clamp(sum.value(), 0.0, 1.0);
    }

    /// P(correct votes < threshold).
    double lower_tail(std::size_t threshold) const {
        detail::CompensatedSum sum;
        for (std::size_t k = 0; k < threshold && k < probabilities_.size(); ++k) {
            sum.add(probabilities_[k]);
        }
        return std::clamp(sum.value(), 0.0, 1.0);
    }

    /// P(the quorum is reached by the correct side).
    double consensus_probability(VotePolicy policy = {}) const {
        return upper_tail(majority_threshold(total_count(), policy));
    }

    const std::vector<double>& probabilities() const noexcept { return probabilities_; }

    VoteDistribution build() const { return VoteDistribution(probabilities_); }

private:
    std::vector<double> probabilities_;
};

/// Distribution of the number of correct votes across the whole ensemble.
///
/// Classes are convolved in ascending order of competence, so any permutation
/// of the ensemble yields a bitwise-identical result.
inline VoteDistribution correct_vote_distribution(const Ensemble& ensemble) {
    std::vector<AgentClass> ordered(ensemble.classes().begin(), ensemble.classes().end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const AgentClass& a, const AgentClass& b) {
        return a.competence() < b.competence();
    });
    VoteDistributionBuilder builder;
    for (const auto& c : ordered) builder.add_class(c);
    return builder.build();
}

/// Probabilities of the three mutually exclusive vote outcomes.
struct OutcomeProbabilities {
    double correct = 0.0;       ///< correct side reaches the quorum
    double wrong = 0.0;         ///< wrong side reaches the quorum
    double no_consensus = 0.0;  ///< neither side does (a tie under simple majority)
};

inline OutcomeProbabilities vote_outcomes(const VoteDistribution& dist, VotePolicy policy = {}) {
    const std::size_t n = dist.total_count();
    const std::size_t m = majority_threshold(n, policy);
    OutcomeProbabilities out;
    out.correct = dist.mass(m, n);
    // Wrong side has n - k >= m votes, i.e. k <= n - m.
    out.wrong = dist.mass(0, n - m);
    out.no_consensus = n - m + 1 < m ? dist.mass(n - m + 1, m - 1) : 0.0;
    return out;
}

/// P(correct consensus) for a heterogeneous ensemble. Outcomes where neither
/// side reaches the quorum count as failures. A single-class ensemble is
/// routed through consensus_probability and agrees with it exactly.
inline double mixed_consensus_probability(const Ensemble& ensemble, VotePolicy policy = {}) {
    if (ensemble.is_homogeneous()) {
        const auto& c = ensemble.classes().front();
        return consensus_probability(c.count(), c.competence(), policy);
    }
    const auto dist = correct_vote_distribution(ensemble);
    detail::CompensatedSum sum;
    const auto probs = dist.probabilities();
    const std::size_t m = majority_threshold(dist.total_count(), policy);
    for (std::size_t k = probs.size(); k-- > m;) sum.add(probs[k]);
    return std::clamp(sum.value(), 0.0, 1.0);
}

/// 1 - mixed_consensus_probability, summed over the lower tail.
inline double mixed_failure_probability(const Ensemble& ensemble, VotePolicy policy = {}) {
    if (ensemble.is_homogeneous()) {
        const auto& c = ensemble.classes().front();
        return consensus_failure_probability(c.count(), c.competence(), policy);
    }
    const auto dist = correct_vote_distribution(ensemble);
    const auto probs = dist.probabilities();
    const std::size_t m = majority_threshold(dist.total_count(), policy);
    detail::CompensatedSum sum;
    for (std::size_t k = 0; k < m; ++k) sum.add(probs[k]);
    return std::clamp(sum.value(), 0.0, 1.0);
}

}  // namespace consensus
