#pragma once

#include <stdexcept>
#include <string>

namespace phonoq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDimensionError : Error {
    using Error::Error;
};

// Requested construction does not fit in the given Fock dimension.
struct TruncationError : Error {
    int required_dim;
    TruncationError(const std::string& msg, int required)
        : Error(msg + " (minimum dim " + std::to_string(required) + ")"), required_dim(required) {}
};

struct DomainError : Error {
    using Error::Error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct ZeroLikelihoodError : Error {
    using Error::Error;
};

struct UndefinedQError : Error {
    using Error::Error;
};

struct DegenerateError : Error {
    using Error::Error;
};

struct RegimeError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    double residual;
    ConvergenceError(const std::string& msg, double res)
        : Error(msg + " (residual " + std::to_string(res) + ")"), residual(res) {}
};

struct NoSolutionError : Error {
    double mismatch;
    NoSolutionError(const std::string& msg, double mm)
        : Error(msg + " (minimal mismatch " + std::to_string(mm) + ")"), mismatch(mm) {}
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace phonoq
