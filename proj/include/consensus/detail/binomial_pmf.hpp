#pragma once

// Binomial point probabilities via Loader's saddle-point expansion
// ("Fast and Accurate Computation of Binomial Probabilities", 2000).
// Each term is accurate to a few ulps relative, which keeps tail sums at
// n = 10^4 well inside 1e-12 absolute.

#include <cmath>
#include <cstddef>
#include <numbers>

namespace consensus::detail {

/// log(k!) - [(k + 1/2) log k - k + log sqrt(2 pi)] for integer k >= 1.
inline double stirling_error(double k) {
    constexpr double s0 = 1.0 / 12.0;
    constexpr double s1 = 1.0 / 360.0;
    constexpr double s2 = 1.0 / 1260.0;
    constexpr double s3 = 1.0 / 1680.0;
    constexpr double s4 = 1.0 / 1188.0;
    if (k <= 15.0) {
        // Small arguments: direct evaluation in extended precision.
        const long double kl = k;
        const long double log_sqrt_2pi = 0.918938533204672741780329736406L;
        return static_cast<double>(std::lgamma(kl + 1.0L) - (kl + 0.5L) * std::log(kl) + kl -
                                   log_sqrt_2pi);
    }
    const double kk = k * k;
    if (k > 500.0) return (s0 - s1 / kk) / k;
    if (k > 80.0) return (s0 - (s1 - s2 / kk) / kk) / k;
    if (k > 35.0) return (s0 - (s1 - (s2 - s3 / kk) / kk) / kk) / k;
    return (s0 - (s1 - (s2 - (s3 - s4 / kk) / kk) / kk) / kk) / k;
}

/// Deviance term x log(x / mean) + mean - x, without cancellation near x = mean.
inline double deviance(double x, double mean) {
    if (std::fabs(x - mean) < 0.1 * (x + mean)) {
        double v = (x - mean) / (x + mean);
        double s = (x - mean) * v;
        double ej = 2.0 * x * v;
        v *= v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v;
            const double next = s + ej / (2 * j + 1);
            if (next == s) return next;
            s = next;
        }
        return s;
    }
    return x * std::log(x / mean) + mean - x;
}

/// P(X = k) for X ~ Binomial(n, p), with q = 1 - p passed separately so
/// callers can supply an exact complement.
inline double binomial_pmf(std::size_t k, std::size_t n, double p, double q) {
    if (k > n) return 0.0;
    const double nd = static_cast<double>(n);
    if (k == 0) return std::exp(nd * std::log1p(-p));
    if (k == n) return std::exp(nd * std::log(p));
    const double kd = static_cast<double>(k);
    const double rest = nd - kd;
    const double log_core = stirling_error(nd) - stirling_error(kd) - stirling_error(rest) -
                            deviance(kd, nd * p) - deviance(rest, nd * q);
    const double log_scale =
        std::log(2.0 * std::numbers::pi) + std::log(kd) + std::log1p(-kd / nd);
    return std::exp(log_core - 0.5 * log_scale);
}

/// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace consensus::detail
