#pragma once

// Regeneration of the two classic reference grids: consensus probability by
// group size and competence, and adjusted competence by prior and competence.
// Each grid carries the published three-decimal values for comparison.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "consensus/consensus.hpp"
#include "consensus/prior_odds.hpp"

namespace consensus {

struct ReferenceTable {
    std::string name;
    std::string title;
    std::string row_label;
    std::string column_label;
    std::vector<double> rows;
    std::vector<double> columns;
    std::vector<std::vector<double>> computed;   ///< full precision
    std::vector<std::vector<double>> published;  ///< three decimals

    static double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

    /// Largest |computed - published| before rounding.
    double max_raw_diff() const {
        double worst = 0.0;
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < columns.size(); ++c)
                worst = std::max(worst, std::fabs(computed[r][c] - published[r][c]));
        return worst;
    }

    /// Largest |round3(computed) - published|.
    double max_rounded_diff() const {
        double worst = 0.0;
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < columns.size(); ++c)
                worst = std::max(worst, std::fabs(round3(computed[r][c]) - published[r][c]));
        // Strip representation noise from values like 0.837 - 0.837.
        return std::round(worst * 1e9) / 1e9;
    }
};

inline constexpr std::array<double, 5> kReferenceCompetences{0.10, 0.30, 0.50, 0.70, 0.90};

/// Consensus probability under simple majority, n = 3, 5, 7, 9.
inline ReferenceTable consensus_table() {
    ReferenceTable t;
    t.name = "table1";
    t.title = "Probability of consensus being correct (equal prior odds)";
    t.row_label = "n";
    t.column_label = "p";
    t.rows = {3, 5, 7, 9};
    t.columns.assign(kReferenceCompetences.begin(), kReferenceCompetences.end());
    t.published = {
        {0.028, 0.216, 0.500, 0.784, 0.972},
        {0.009, 0.163, 0.500, 0.837, 0.991},
        {0.003, 0.126, 0.500, 0.874, 0.997},
        {0.001, 0.099, 0.500, 0.901, 0.999},
    };
    for (double n : t.rows) {
        auto& row = t.computed.emplace_back();
        for (double p : t.columns) row.push_back(consensus_probability(static_cast<std::size_t>(n), p));
    }
    return t;
}

/// Bayes-adjusted competence for priors 0.1 .. 0.9.
inline ReferenceTable prior_odds_table() {
    ReferenceTable t;
    t.name = "table2";
    t.title = "Probability of an individual decision being correct given unequal prior odds";
    t.row_label = "prior";
    t.column_label = "p";
    t.rows = {0.10, 0.20, 0.30, 0.40, 0.50, 0.60, 0.70, 0.80, 0.90};
    t.columns.assign(kReferenceCompetences.begin(), kReferenceCompetences.end());
    t.published = {
        {0.012, 0.045, 0.100, 0.206, 0.500},
        {0.027, 0.097, 0.200, 0.368, 0.692},
        {0.045, 0.155, 0.300, 0.500, 0.794},
        {0.069, 0.222, 0.400, 0.609, 0.857},
        {0.100, 0.300, 0.500, 0.700, 0.900},
        {0.143, 0.391, 0.600, 0.778, 0.931},
        {0.206, 0.500, 0.700, 0.845, 0.955},
        {0.308, 0.632, 0.800, 0.903, 0.973},
        {0.500, 0.794, 0.900, 0.955, 0.988},
    };
    for (double prior : t.rows) {
        auto& row = t.computed.emplace_back();
        for (double p : t.columns) row.push_back(bayes_adjusted_competence(p, DecisionPrior(prior)));
    }
    return t;
}

/// Looks a table up by name ("table1" or "table2").
inline std::optional<ReferenceTable> reference_table(std::string_view name) {
    if (name == "table1") return consensus_table();
    if (name == "table2") return prior_odds_table();
    return std::nullopt;
}

}  // namespace consensus
