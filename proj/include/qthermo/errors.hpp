// errors.hpp: exception types shared by all modules

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace qthermo {

// Raised when an input lies outside an operation's mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Configuration / schema problems (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File system problems (CLI exit code 3).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

template <typename Scalar>
inline void require_positive(Scalar v, const char* what) {
    using std::isfinite;
    if (!isfinite(v) || !(v > Scalar(0))) {
        throw DomainError(std::string(what) + " must be finite and positive");
    }
}

template <typename Scalar>
inline void require_non_negative(Scalar v, const char* what) {
    using std::isfinite;
    if (!isfinite(v) || v < Scalar(0)) {
        throw DomainError(std::string(what) + " must be finite and non-negative");
    }
}

}  // namespace detail

}  // namespace qthermo
