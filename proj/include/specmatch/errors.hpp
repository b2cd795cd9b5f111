#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace specmatch {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data (bad CSV, non-monotone wavelengths, wrong sizes).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Requested wavelengths outside the measured coverage.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A matrix that must have full column rank does not.
class RankError : public Error {
public:
    using Error::Error;
};

/// Argument outside its mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// No feasible point exists (e.g. target chromaticity outside the gamut).
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Degenerate problem instance (e.g. zero-norm fit target).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Iteration cap hit before the convergence test was met. Carries the best
/// iterate found so the caller can still inspect it.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, std::vector<double> best)
        : Error(what), best_iterate(std::move(best)) {}
    std::vector<double> best_iterate;
};

} // namespace specmatch
