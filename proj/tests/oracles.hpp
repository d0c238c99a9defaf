#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerical routines: distributions are enumerated or
// built from explicit binomial coefficients in long double, and binomial
// tails come from Boost's regularized incomplete beta.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

namespace oracle {

/// Per-agent competences expanded from (count, competence) pairs.
inline std::vector<double> expand(const std::vector<std::pair<std::size_t, double>>& classes) {
    std::vector<double> agents;
    for (const auto& [count, p] : classes)
        for (std::size_t i = 0; i < count; ++i) agents.push_back(p);
    return agents;
}

/// Distribution of correct votes by summing all 2^n outcome paths.
inline std::vector<long double> enumerate_distribution(const std::vector<double>& agents) {
    const std::size_t n = agents.size();
    std::vector<long double> dist(n + 1, 0.0L);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        long double path = 1.0L;
        std::size_t correct = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                path *= agents[i];
                ++correct;
            } else {
                path *= 1.0L - agents[i];
            }
        }
        dist[correct] += path;
    }
    return dist;
}

/// threshold = floor(quorum * n) + 1, written out independently.
inline std::size_t threshold(std::size_t n, double quorum) {
    if (quorum == 0.5) return n / 2 + 1;
    return static_cast<std::size_t>(std::floor(quorum * static_cast<double>(n) + 1e-9)) + 1;
}

inline double enumerate_consensus(const std::vector<double>& agents, double quorum = 0.5) {
    const auto dist = enumerate_distribution(agents);
    long double sum = 0.0L;
    for (std::size_t k = threshold(agents.size(), quorum); k < dist.size(); ++k) sum += dist[k];
    return static_cast<double>(sum);
}

/// P(X >= m), X ~ Binomial(n, p), via I_p(m, n - m + 1).
inline double binomial_upper_tail(std::size_t n, double p, std::size_t m) {
    if (m == 0) return 1.0;
    if (m > n) return 0.0;
    return boost::math::ibeta(static_cast<double>(m), static_cast<double>(n - m + 1), p);
}

/// Binomial pmf from log-gamma coefficients in long double.
inline std::vector<long double> binomial_pmf_vector(std::size_t n, long double p) {
    std::vector<long double> out(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const long double log_c = std::lgamma(static_cast<long double>(n) + 1.0L) -
                                  std::lgamma(static_cast<long double>(k) + 1.0L) -
                                  std::lgamma(static_cast<long double>(n - k) + 1.0L);
        out[k] = std::exp(log_c + static_cast<long double>(k) * std::log(p) +
                          static_cast<long double>(n - k) * std::log1p(-p));
    }
    return out;
}

/// P_C of a count_a @ p_a plus count_b @ p_b group, by convolving two
/// binomial pmfs (whole-group, not agent-by-agent).
inline long double two_class_consensus(std::size_t count_a, double p_a, std::size_t count_b, double p_b) {
    const auto a = binomial_pmf_vector(count_a, p_a);
    const auto b = count_b ? binomial_pmf_vector(count_b, p_b) : std::vector<long double>{1.0L};
    const std::size_t n = count_a + count_b;
    const std::size_t m = n / 2 + 1;
    long double sum = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (i + j >= m) sum += a[i] * b[j];
    return sum;
}

/// Smallest B size in 1..cap beating group A alone, by direct re-evaluation
/// at every size.
inline std::optional<std::size_t> critical_size_scan(std::size_t count_a, double p_a, double p_b,
                                                     std::size_t cap) {
    const long double base = two_class_consensus(count_a, p_a, 0, 0.5);
    for (std::size_t b = 1; b <= cap; ++b)
        if (two_class_consensus(count_a, p_a, b, p_b) > base) return b;
    return std::nullopt;
}

/// Smallest grid competence at which no even B size in 2..cap lowers P_C(A).
inline double critical_competence_grid(double p_a, std::size_t count_a, std::size_t cap, double step) {
    const long double base = two_class_consensus(count_a, p_a, 0, 0.5);
    for (long k = static_cast<long>(std::ceil(0.5 / step)) + 1;; ++k) {
        const double p_b = static_cast<double>(k) * step;
        if (p_b >= p_a) return p_a;
        bool ok = true;
        for (std::size_t b = 2; b <= cap && ok; b += 2) ok = two_class_consensus(count_a, p_a, b, p_b) >= base;
        if (ok) return p_b;
    }
}

/// With two B agents, P_C(A+B) >= P_C(A) reduces to odds(p_b)^2 >= odds(p_a).
inline double critical_competence_closed_form(double p_a) {
    const double root = std::sqrt(p_a / (1.0 - p_a));
    return root / (1.0 + root);
}

inline double poisson_cdf_direct(std::size_t last, double rate) {
    long double sum = 0.0L;
    for (std::size_t k = 0; k <= last; ++k)
        sum += std::exp(-static_cast<long double>(rate)) * std::pow(static_cast<long double>(rate), k) /
               std::tgamma(static_cast<long double>(k) + 1.0L);
    return static_cast<double>(sum);
}

inline double bayes_direct(double p, double prior) {
    // P(S | says S) with likelihoods P(says S | S) = p, P(says S | not S) = 1 - p.
    const long double joint_true = static_cast<long double>(p) * prior;
    const long double joint_false = (1.0L - p) * (1.0L - prior);
    return static_cast<double>(joint_true / (joint_true + joint_false));
}

}  // namespace oracle
