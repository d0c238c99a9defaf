#pragma once

#include <stdexcept>
#include <string>

namespace consensus {

/// Raised when an argument lies outside the domain of the model
/// (probabilities outside (0,1), empty ensembles, zero counts, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a quorum threshold exceeds the number of voters.
class NoQuorumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a root-finding bracket does not contain a sign change.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

inline void require_open_probability(double p, const char* name) {
    // NaN fails both comparisons.
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(std::string(name) + " must lie in the open interval (0,1), got " +
                          std::to_string(p));
    }
}

}  // namespace detail
}  // namespace consensus
