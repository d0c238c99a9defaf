#pragma once

// Seeded Monte Carlo model of a task-centralised system: a coordinating agent
// polls every voting agent, tallies the votes against the quorum and records
// whether the chosen alternative was the true state.
//
// Randomness is counter-based. Trial i draws from a stream keyed by
// mix(seed, i), so a trial never depends on any other trial and the
// aggregate is identical for every thread count and schedule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "consensus/consensus.hpp"
#include "consensus/error.hpp"
#include "consensus/types.hpp"

namespace consensus {

/// Stafford's "Mix13" 64-bit finaliser (the SplitMix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stateless-per-trial random stream: output j of trial t under seed s is
/// mix64(key(s, t) + j * golden_gamma), key(s, t) = mix64(s ^ mix64(t + c)).
class TrialStream {
public:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kTrialSalt = 0x632be59bd9b4e019ULL;

    TrialStream(std::uint64_t seed, std::uint64_t trial_index) noexcept
        : key_(mix64(seed ^ mix64(trial_index + kTrialSalt))) {}

    std::uint64_t next() noexcept { return mix64(key_ + (++counter_) * kGamma); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

struct SimulationConfig {
    Ensemble ensemble;
    DecisionPrior prior = DecisionPrior::equal_odds();
    VotePolicy policy{};
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;

    void validate() const { detail::require(trials >= 1, "trials must be at least 1"); }
};

enum class TrialOutcome { CorrectConsensus, WrongConsensus, NoConsensus };

inline const char* to_string(TrialOutcome o) noexcept {
    switch (o) {
        case TrialOutcome::CorrectConsensus: return "correct";
        case TrialOutcome::WrongConsensus: return "wrong";
        case TrialOutcome::NoConsensus: return "tie";
    }
    return "?";
}

struct TrialRecord {
    std::uint64_t trial_index = 0;
    Alternative true_state = Alternative::First;
    /// Correct votes per class, in ensemble order. Agents within a class are
    /// exchangeable, so individual ballots are not kept.
    std::vector<std::size_t> correct_votes_by_class;
    std::size_t correct_vote_count = 0;
    std::size_t votes_for_first = 0;
    std::size_t votes_for_second = 0;
    std::optional<Alternative> chosen;
    TrialOutcome outcome = TrialOutcome::NoConsensus;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Plays one decision: draw the true state from the prior, let every agent
/// vote, and let the coordinator apply the quorum.
inline TrialRecord run_trial(const SimulationConfig& config, std::uint64_t trial_index) {
    config.validate();
    detail::require(trial_index < config.trials, "trial_index must be below trials");

    TrialStream stream(config.seed, trial_index);
    TrialRecord rec;
    rec.trial_index = trial_index;
    rec.true_state = stream.bernoulli(config.prior.p_state()) ? Alternative::First : Alternative::Second;

    const auto classes = config.ensemble.classes();
    rec.correct_votes_by_class.reserve(classes.size());
    for (const auto& c : classes) {
        std::size_t correct = 0;
        for (std::size_t i = 0; i < c.count(); ++i) correct += stream.bernoulli(c.competence()) ? 1 : 0;
        rec.correct_votes_by_class.push_back(correct);
        rec.correct_vote_count += correct;
    }

    const std::size_t n = config.ensemble.total_count();
    const std::size_t wrong = n - rec.correct_vote_count;
    const bool first_true = rec.true_state == Alternative::First;
    rec.votes_for_first = first_true ? rec.correct_vote_count : wrong;
    rec.votes_for_second = n - rec.votes_for_first;

    const std::size_t threshold = majority_threshold(n, config.policy);
    if (rec.votes_for_first >= threshold) {
        rec.chosen = Alternative::First;
    } else if (rec.votes_for_second >= threshold) {
        rec.chosen = Alternative::Second;
    }
    if (!rec.chosen) {
        rec.outcome = TrialOutcome::NoConsensus;
    } else if (*rec.chosen == rec.true_state) {
        rec.outcome = TrialOutcome::CorrectConsensus;
    } else {
        rec.outcome = TrialOutcome::WrongConsensus;
    }
    return rec;
}

struct AlternativeTally {
    std::uint64_t times_chosen = 0;
    std::uint64_t times_chosen_and_true = 0;

    friend bool operator==(const AlternativeTally&, const AlternativeTally&) = default;
};

struct SimulationOutcome {
    std::uint64_t trials = 0;
    std::uint64_t correct_consensus = 0;
    std::uint64_t wrong_consensus = 0;
    std::uint64_t ties = 0;
    AlternativeTally first;
    AlternativeTally second;

    const AlternativeTally& tally(Alternative a) const noexcept {
        return a == Alternative::First ? first : second;
    }

    /// correct / (trials - ties); empty when every trial tied.
    std::optional<double> empirical_p_c() const noexcept {
        const std::uint64_t decided = trials - ties;
        if (decided == 0) return std::nullopt;
        return static_cast<double>(correct_consensus) / static_cast<double>(decided);
    }

    /// P(alternative is true | consensus chose it); empty when never chosen.
    std::optional<double> empirical_p_r(Alternative a = Alternative::First) const noexcept {
        const auto& t = tally(a);
        if (t.times_chosen == 0) return std::nullopt;
        return static_cast<double>(t.times_chosen_and_true) / static_cast<double>(t.times_chosen);
    }

    void add(const TrialRecord& rec) noexcept {
        ++trials;
        switch (rec.outcome) {
            case TrialOutcome::CorrectConsensus: ++correct_consensus; break;
            case TrialOutcome::WrongConsensus: ++wrong_consensus; break;
            case TrialOutcome::NoConsensus: ++ties; break;
        }
        if (rec.chosen) {
            auto& t = *rec.chosen == Alternative::First ? first : second;
            ++t.times_chosen;
            if (*rec.chosen == rec.true_state) ++t.times_chosen_and_true;
        }
    }

    void merge(const SimulationOutcome& o) noexcept {
        trials += o.trials;
        correct_consensus += o.correct_consensus;
        wrong_consensus += o.wrong_consensus;
        ties += o.ties;
        first.times_chosen += o.first.times_chosen;
        first.times_chosen_and_true += o.first.times_chosen_and_true;
        second.times_chosen += o.second.times_chosen;
        second.times_chosen_and_true += o.second.times_chosen_and_true;
    }

    friend bool operator==(const SimulationOutcome&, const SimulationOutcome&) = default;
};

/// Standard error of a proportion estimated from `samples` draws.
inline double proportion_standard_error(double p, std::uint64_t samples) {
    return samples == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

/// Runs trials [0, config.trials) split across `threads` workers (0 picks
/// the hardware concurrency). The result does not depend on `threads`.
inline SimulationOutcome simulate(const SimulationConfig& config, unsigned threads = 1) {
    config.validate();
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t workers = std::min<std::uint64_t>(threads, config.trials);

    std::vector<SimulationOutcome> partial(workers);
    const auto run_range = [&config](std::uint64_t begin, std::uint64_t end, SimulationOutcome& out) {
        for (std::uint64_t t = begin; t < end; ++t) out.add(run_trial(config, t));
    };

    const std::uint64_t chunk = config.trials / workers;
    const std::uint64_t extra = config.trials % workers;
    std::vector<std::jthread> pool;
    std::uint64_t begin = 0;
    for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t end = begin + chunk + (w < extra ? 1 : 0);
        if (w + 1 == workers) {
            run_range(begin, end, partial[w]);
        } else {
            pool.emplace_back(run_range, begin, end, std::ref(partial[w]));
        }
        begin = end;
    }
    pool.clear();

    SimulationOutcome total;
    for (const auto& p : partial) total.merge(p);
    return total;
}

/// Writes one JSON object per trial: trial_index, true_state (1 or 2),
/// correct_vote_count and outcome ("correct", "wrong" or "tie").
inline void write_trace(const SimulationConfig& config, std::ostream& out,
                        std::uint64_t limit = UINT64_MAX) {
    config.validate();
    const std::uint64_t count = std::min(limit, config.trials);
    for (std::uint64_t t = 0; t < count; ++t) {
        const auto rec = run_trial(config, t);
        out << "{\"trial_index\":" << rec.trial_index << ",\"true_state\":" << static_cast<int>(rec.true_state)
            << ",\"correct_votes_by_class\":[";
        for (std::size_t i = 0; i < rec.correct_votes_by_class.size(); ++i)
            out << (i ? "," : "") << rec.correct_votes_by_class[i];
        out << "],\"correct_vote_count\":" << rec.correct_vote_count << ",\"votes_for_first\":"
            << rec.votes_for_first << ",\"votes_for_second\":" << rec.votes_for_second << ",\"chosen\":";
        if (rec.chosen)
            out << static_cast<int>(*rec.chosen);
        else
            out << "null";
        out << ",\"outcome\":\"" << to_string(rec.outcome) << "\"}\n";
    }
}

}  // namespace consensus
