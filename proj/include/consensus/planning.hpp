#pragma once

// Design-time solvers: how many agents to deploy, and when a second, less
// competent group of agents should join the vote.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>

#include "consensus/consensus.hpp"
#include "consensus/error.hpp"
#include "consensus/prior_odds.hpp"
#include "consensus/types.hpp"

namespace consensus {

struct PlanResult {
    /// Smallest odd agent count meeting the target; empty when unattainable.
    std::optional<std::size_t> required_n;
    /// Consensus probability at required_n, or the best seen during the search.
    double achieved_value = 0.0;
    /// Competence actually used (Bayes-adjusted when a prior was supplied).
    double effective_competence = 0.0;

    bool attainable() const noexcept { return required_n.has_value(); }
};

/// Smallest odd n <= max_n with consensus_probability(n, p) >= target.
///
/// Even sizes are skipped: under simple majority an even group only adds a
/// tie outcome. When the (adjusted) competence is at most one half no group
/// beats a single agent, so targets above it are reported unattainable
/// without searching.
inline PlanResult plan_agent_count(double p, double target, std::size_t max_n, VotePolicy policy = {},
                                   std::optional<DecisionPrior> prior = std::nullopt) {
    detail::require_open_probability(p, "competence");
    detail::require_open_probability(target, "target");
    detail::require(max_n >= 1, "max_n must be at least 1");

    PlanResult result;
    result.effective_competence = prior ? bayes_adjusted_competence(p, *prior) : p;
    const double effective = result.effective_competence;

    if (effective <= 0.5 + kIndifferenceTolerance && target > effective) {
        result.achieved_value = effective;
        return result;
    }

    double best = 0.0;
    for (std::size_t n = 1; n <= max_n; n += 2) {
        const double value = consensus_probability(n, effective, policy);
        best = std::max(best, value);
        if (value >= target) {
            result.required_n = n;
            result.achieved_value = value;
            return result;
        }
    }
    result.achieved_value = best;
    return result;
}

struct CriticalSizeResult {
    enum class Kind { Found, NoneWithinBound, Never };

    Kind kind = Kind::NoneWithinBound;
    std::optional<std::size_t> b_star;
    std::size_t search_cap = 0;
    double baseline = 0.0;  ///< P_C of group A alone
    double achieved = 0.0;  ///< P_C of A plus b_star B agents (Found only)
};

inline std::string_view to_string(CriticalSizeResult::Kind k) noexcept {
    switch (k) {
        case CriticalSizeResult::Kind::Found: return "FOUND";
        case CriticalSizeResult::Kind::NoneWithinBound: return "NONE_WITHIN_BOUND";
        case CriticalSizeResult::Kind::Never: return "NEVER";
    }
    return "?";
}

inline constexpr std::size_t kDefaultCriticalSizeCap = 5000;

/// Number of B-sizes scanned to confirm that a sub-one-half group never helps.
inline constexpr std::size_t kNeverSampleSize = 200;

/// Smallest number b in 1..search_cap of agents at competence p_b whose
/// addition to group_a strictly raises the consensus probability above that
/// of group_a alone. B agents are added one at a time to a running
/// distribution, so the whole scan costs O(cap * (|A| + cap)).
inline CriticalSizeResult critical_group_size(const AgentClass& group_a, double p_b,
                                              std::size_t search_cap = kDefaultCriticalSizeCap,
                                              VotePolicy policy = {}) {
    detail::require(group_a.competence() > 0.5, "group A competence must exceed 1/2");
    detail::require_open_probability(p_b, "group B competence");
    detail::require(search_cap >= 1, "search_cap must be at least 1");

    CriticalSizeResult result;
    result.search_cap = search_cap;

    VoteDistributionBuilder running;
    running.add_class(group_a);
    result.baseline = running.consensus_probability(policy);

    // Below one half a B group can only hurt; confirm on a prefix of sizes
    // instead of assuming it.
    const bool hopeless = p_b < 0.5;
    const std::size_t limit = hopeless ? std::min(search_cap, kNeverSampleSize) : search_cap;

    for (std::size_t b = 1; b <= limit; ++b) {
        running.add_agent(p_b);
        const double value = running.consensus_probability(policy);
        if (value > result.baseline) {
            result.kind = CriticalSizeResult::Kind::Found;
            result.b_star = b;
            result.achieved = value;
            return result;
        }
    }
    result.kind = hopeless ? CriticalSizeResult::Kind::Never : CriticalSizeResult::Kind::NoneWithinBound;
    return result;
}

namespace detail {

/// True when adding b agents at p_b never lowers the consensus probability of
/// group A, for every b in 1..cap that keeps the combined size at A's parity.
inline bool second_group_never_hurts(const AgentClass& group_a, double p_b, std::size_t cap,
                                     VotePolicy policy) {
    VoteDistributionBuilder running;
    running.add_class(group_a);
    const double baseline = running.consensus_probability(policy);
    for (std::size_t b = 1; b <= cap; ++b) {
        running.add_agent(p_b);
        if (b % 2 != 0) continue;
        if (running.consensus_probability(policy) < baseline) return false;
    }
    return true;
}

}  // namespace detail

/// Infimum competence p_b in (1/2, p_a) above which a B group of any
/// parity-preserving size 2, 4, ..., <= search_cap never lowers the consensus
/// probability of `a_count` agents at p_a. Found by bisection to `tolerance`;
/// the returned value is the upper end of the final bracket, so it satisfies
/// the condition.
///
/// Odd additions are excluded: with tie-is-failure, adding one agent to an odd
/// group strictly lowers its consensus probability for every p_b < 1.
inline double critical_competence(double p_a, std::size_t a_count, std::size_t search_cap = 50,
                                  double tolerance = 1e-4, VotePolicy policy = {}) {
    detail::require(p_a > 0.5 && p_a < 1.0, "group A competence must lie in (1/2, 1)");
    detail::require(a_count >= 1 && a_count % 2 == 1, "group A size must be odd");
    detail::require(search_cap >= 2, "search_cap must allow at least two B agents");
    detail::require(tolerance >= 1e-6, "tolerance must be at least 1e-6");

    const AgentClass group_a(a_count, p_a);
    double lo = 0.5;
    double hi = p_a;
    const auto good = [&](double p_b) {
        return detail::second_group_never_hurts(group_a, p_b, search_cap, policy);
    };
    if (!good(hi) || good(std::nextafter(lo, 1.0))) {
        throw ConvergenceError("critical competence is not bracketed by (1/2, p_a)");
    }
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (good(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

/// Consensus probability of a full homogeneous group and of a smaller subset
/// drawn from it. The caller decides what ordering to expect; below one half
/// the subset wins.
inline std::pair<double, double> subset_dominance(const AgentClass& group, std::size_t subset_count,
                                                  VotePolicy policy = {}) {
    detail::require(subset_count >= 1 && subset_count < group.count(),
                    "subset size must satisfy 1 <= subset < group size");
    return {consensus_probability(group.count(), group.competence(), policy),
            consensus_probability(subset_count, group.competence(), policy)};
}

}  // namespace consensus
