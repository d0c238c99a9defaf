#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "consensus/error.hpp"

namespace consensus {

/// A homogeneous group of voting agents: `count` agents, each independently
/// correct with probability `competence`.
class AgentClass {
public:
    AgentClass(std::size_t count, double competence) : count_(count), competence_(competence) {
        detail::require(count >= 1, "agent class count must be at least 1");
        detail::require_open_probability(competence, "competence");
    }

    std::size_t count() const noexcept { return count_; }
    double competence() const noexcept { return competence_; }

    friend bool operator==(const AgentClass&, const AgentClass&) = default;

private:
    std::size_t count_;
    double competence_;
};

/// Ordered, non-empty list of agent classes forming the voting population.
class Ensemble {
public:
    explicit Ensemble(std::vector<AgentClass> classes) : classes_(std::move(classes)) {
        detail::require(!classes_.empty(), "ensemble must contain at least one agent class");
    }

    Ensemble(std::initializer_list<AgentClass> classes)
        : Ensemble(std::vector<AgentClass>(classes)) {}

    /// Single-class convenience.
    static Ensemble homogeneous(std::size_t count, double competence) {
        return Ensemble({AgentClass(count, competence)});
    }

    std::span<const AgentClass> classes() const noexcept { return classes_; }

    std::size_t total_count() const noexcept {
        return std::accumulate(classes_.begin(), classes_.end(), std::size_t{0},
                               [](std::size_t acc, const AgentClass& c) { return acc + c.count(); });
    }

    bool is_homogeneous() const noexcept { return classes_.size() == 1; }

    friend bool operator==(const Ensemble&, const Ensemble&) = default;

private:
    std::vector<AgentClass> classes_;
};

/// Fraction of the electorate that must agree for a consensus to exist.
/// The threshold is floor(quorum * n) + 1, which for quorum = 1/2 is the
/// usual simple majority: (n+1)/2 for odd n and n/2 + 1 for even n.
class VotePolicy {
public:
    constexpr VotePolicy() = default;

    explicit VotePolicy(double quorum) : quorum_(quorum) {
        detail::require(quorum >= 0.5 && quorum < 1.0,
                        "quorum must satisfy 1/2 <= quorum < 1, got " + std::to_string(quorum));
    }

    static VotePolicy simple_majority() { return VotePolicy{}; }

    double quorum() const noexcept { return quorum_; }

    bool is_simple_majority() const noexcept { return quorum_ == 0.5; }

    friend bool operator==(const VotePolicy&, const VotePolicy&) = default;

private:
    double quorum_ = 0.5;
};

/// Prior probability that the first of the two alternatives is the true state.
class DecisionPrior {
public:
    explicit DecisionPrior(double p_state) : p_state_(p_state) {
        detail::require_open_probability(p_state, "prior probability");
    }

    static DecisionPrior equal_odds() { return DecisionPrior(0.5); }

    double p_state() const noexcept { return p_state_; }

    /// Prior of the other alternative.
    DecisionPrior complement() const { return DecisionPrior(1.0 - p_state_); }

    friend bool operator==(const DecisionPrior&, const DecisionPrior&) = default;

private:
    double p_state_;
};

/// probabilities()[k] = P(exactly k agents vote correctly), k = 0..n.
class VoteDistribution {
public:
    explicit VoteDistribution(std::vector<double> probabilities)
        : probabilities_(std::move(probabilities)) {
        detail::require(!probabilities_.empty(), "vote distribution must have at least one entry");
    }

    std::span<const double> probabilities() const noexcept { return probabilities_; }
    std::size_t total_count() const noexcept { return probabilities_.size() - 1; }
    double operator[](std::size_t k) const { return probabilities_.at(k); }

    /// Sum of P(k) for k in [first, last], clamped to the support.
    double mass(std::size_t first, std::size_t last) const {
        double sum = 0.0;
        for (std::size_t k = first; k <= last && k < probabilities_.size(); ++k) {
            sum += probabilities_[k];
        }
        return sum;
    }

    friend bool operator==(const VoteDistribution&, const VoteDistribution&) = default;

private:
    std::vector<double> probabilities_;
};

/// Two-alternative decision: which state of nature, or which recommendation.
enum class Alternative { First = 1, Second = 2 };

inline Alternative other(Alternative a) noexcept {
    return a == Alternative::First ? Alternative::Second : Alternative::First;
}

}  // namespace consensus
