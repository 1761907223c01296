#pragma once

#include <stdexcept>
#include <string>

namespace annuli {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad CLI flags or malformed config files.
struct UsageError : Error {
    using Error::Error;
};

// Invalid annulus geometry (tau >= sigma, r outside (0,1), p >= q).
struct GeometryError : Error {
    using Error::Error;
};

// Invalid builtin-metric name or parameters.
struct ParamError : Error {
    using Error::Error;
};

// Evaluation requested outside the metric/map domain.
struct DomainError : Error {
    using Error::Error;
};

// Metric fails the regularity requirement on the given annulus.
struct RegularityError : Error {
    using Error::Error;
};

// s*rho(s) is constant on the annulus; the critical construction degenerates.
struct DegeneracyError : Error {
    using Error::Error;
};

// Operation called in the wrong modulus regime (e.g. solve for r below the bound).
struct RegimeError : Error {
    using Error::Error;
};

// A stated precondition does not hold (wrong map direction, metric not defined at 0, ...).
struct PreconditionError : Error {
    using Error::Error;
};

// Root bracket has no sign change.
struct BracketError : Error {
    using Error::Error;
};

// Grid/mesh specification too coarse or otherwise unusable.
struct ConfigError : Error {
    using Error::Error;
};

// Integrand or map returned a non-finite value at an interior point.
struct EvaluationError : Error {
    using Error::Error;
};

// Requested tolerance not reached; carries the best estimate obtained.
struct AccuracyError : Error {
    double best_estimate;
    double err_estimate;
    AccuracyError(const std::string& msg, double best, double err)
        : Error(msg), best_estimate(best), err_estimate(err) {}
};

// Bracket expansion hit its growth cap without finding a sign change.
struct UnboundedRootError : Error {
    using Error::Error;
};

} // namespace annuli
