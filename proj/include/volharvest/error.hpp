#pragma once

#include <stdexcept>
#include <string>

namespace volharvest {

// Base for every error raised by the library. The CLI maps these to a
// non-zero exit status and prints what() on stderr.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Correlation incompatible with the Bernoulli marginals (some joint
// probability falls outside [0,1]).
class InfeasibleCorrelation : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

// A documented precondition was not met (parameter invariant, flag unset).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// optimal_theta on a market whose GenEq curvature vanishes.
class DegenerateMarket : public Error {
public:
    using Error::Error;
};

class SingularCovariance : public Error {
public:
    using Error::Error;
};

class EmptyEnsemble : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent input data. Carries the 1-based source line
// when it is known (0 otherwise).
class DataError : public Error {
public:
    explicit DataError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyIntersection : public Error {
public:
    using Error::Error;
};

}  // namespace volharvest
