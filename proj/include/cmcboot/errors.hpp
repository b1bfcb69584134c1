#pragma once

#include <stdexcept>
#include <string>

namespace cmcboot {

/// Base class for all cmcboot exceptions.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A kernel or policy row does not sum to 1 within tolerance.
struct RowSumError : Error {
    RowSumError(int s, int a, double residual)
        : Error("row (" + std::to_string(s) + "," + std::to_string(a) +
                ") sums to 1 with residual " + std::to_string(residual)),
          state(s), action(a), residual(residual) {}
    int state;
    int action;
    double residual;
};

/// A probability entry is negative (or above 1).
struct NegativeEntryError : Error {
    using Error::Error;
};

struct EmptyDatasetError : Error {
    using Error::Error;
};

struct EmptySamplesError : Error {
    using Error::Error;
};

/// Linear Bellman system could not be solved; signals an invalid kernel upstream.
struct SingularSystemError : Error {
    using Error::Error;
};

/// Iterative solver failed to reach tolerance within the iteration budget.
struct NoConvergenceError : Error {
    NoConvergenceError(const std::string& what, long iterations)
        : Error(what), iterations(iterations) {}
    long iterations;
};

/// Matrix shapes are inconsistent with the sat vectorization convention.
struct IndexConventionError : Error {
    using Error::Error;
};

struct NegativeVarianceError : Error {
    using Error::Error;
};

/// Chain is not ergodic: reducible, or periodic.
struct ReducibleError : Error {
    using Error::Error;
};

struct NonPositiveResetKernelError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace cmcboot
