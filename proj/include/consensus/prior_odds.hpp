#pragma once

// Competence adjustment under unequal prior odds, and the use/don't-use rule.

#include <cmath>
#include <cstddef>
#include <string_view>

#include "consensus/consensus.hpp"
#include "consensus/types.hpp"

namespace consensus {

/// Posterior probability that the first alternative is the true state given
/// that an agent of competence p recommended it:
///
///     p * ps / (p * ps + (1 - p) * (1 - ps))
///
/// Calling it with prior.complement() gives the figure for the second
/// alternative.
inline double bayes_adjusted_competence(double p, DecisionPrior prior) {
    detail::require_open_probability(p, "competence");
    const double ps = prior.p_state();
    const double hit = p * ps;
    const double false_alarm = (1.0 - p) * (1.0 - ps);
    return hit / (hit + false_alarm);
}

enum class Verdict { Use, Indifferent, DoNotUse };

inline std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Use: return "USE";
        case Verdict::Indifferent: return "INDIFFERENT";
        case Verdict::DoNotUse: return "DO_NOT_USE";
    }
    return "?";
}

struct ConsensusAdvice {
    Verdict verdict;
    double adjusted_competence;
    double margin;  ///< p + ps - 1
};

/// |margin| at or below this counts as exactly zero.
inline constexpr double kIndifferenceTolerance = 1e-12;

/// Consensus only pays off when p + ps > 1, which is exactly when the
/// adjusted competence exceeds one half.
inline ConsensusAdvice consensus_advice(double p, DecisionPrior prior) {
    const double adjusted = bayes_adjusted_competence(p, prior);
    const double margin = p + prior.p_state() - 1.0;
    Verdict verdict = Verdict::Indifferent;
    if (margin > kIndifferenceTolerance) {
        verdict = Verdict::Use;
    } else if (margin < -kIndifferenceTolerance) {
        verdict = Verdict::DoNotUse;
    }
    return {verdict, adjusted, margin};
}

inline double consensus_probability_with_priors(std::size_t n, double p, DecisionPrior prior,
                                                VotePolicy policy = {}) {
    return consensus_probability(n, bayes_adjusted_competence(p, prior), policy);
}

}  // namespace consensus
