#pragma once

#include <stdexcept>
#include <string>

namespace secrecy {

// Error taxonomy shared by the C++ core; the C API maps each subclass to a
// status code at the boundary.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument or configuration value.
class DomainError : public Error {
public:
    using Error::Error;
};

// Root bracket without a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

// Iteration budget exhausted. Carries the best estimate and a bound on its
// error so callers can decide whether the partial result is usable.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best, double bound)
        : Error(what), best_estimate(best), error_bound(bound) {}
    double best_estimate;
    double error_bound;
};

// Two supposedly-equivalent evaluation paths disagreed beyond tolerance.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace secrecy
