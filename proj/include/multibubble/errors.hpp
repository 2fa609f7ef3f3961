// Error types shared across the multibubble library.
#pragma once

#include <stdexcept>
#include <string>

namespace multibubble {

// Dimension or shape precondition violated (q < 2, n < q-1, ...).
struct InvalidDimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain (boundary measure vector,
// quantile at 0 or 1, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Structurally malformed input (bad JSON shape, closure violation, ...).
struct SchemaError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An iteration failed to reach its tolerance; carries the last residual.
struct ConvergenceError : std::runtime_error {
    double last_residual;
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what + " (last residual " + std::to_string(residual) + ")"),
          last_residual(residual) {}
};

// Quadrature could not reach the requested tolerance.
struct AccuracyError : std::runtime_error {
    double achieved_tol;
    AccuracyError(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved tolerance " + std::to_string(achieved) + ")"),
          achieved_tol(achieved) {}
};

// Cluster has rank-zero B, a zero-norm edge, or an empty edge set.
struct DegenerateClusterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Edge-normal assignment violates the cycle condition.
struct InconsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Linear system has no unique solution (disconnected edge graph).
struct UnderdeterminedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace multibubble
