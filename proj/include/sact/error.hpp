#pragma once

#include <stdexcept>
#include <string>

namespace sact {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input that no amount of numerical care will fix (bad order,
/// bad box, length mismatch). The CLI maps these to exit code 2.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A well-posed request that the mathematics refuses: ineligible direction,
/// singular system, unsupported smoothness. The CLI maps these to exit code 1.
class DomainError : public Error {
public:
    using Error::Error;
};

class EmptyProblemError : public DomainError {
public:
    using DomainError::DomainError;
};

class SmoothnessError : public DomainError {
public:
    using DomainError::DomainError;
};

class WrongCaseError : public DomainError {
public:
    using DomainError::DomainError;
};

class IneligibleDirectionError : public DomainError {
public:
    using DomainError::DomainError;
};

class GridTooFineError : public DomainError {
public:
    GridTooFineError(const std::string& what, double requested)
        : DomainError(what), requested_(requested) {}
    double requested() const noexcept { return requested_; }

private:
    double requested_;
};

/// No #E-subset of the candidate rows reached the invertibility tolerance.
class SelectionFailure : public DomainError {
public:
    SelectionFailure(const std::string& what, double best_ratio)
        : DomainError(what), best_ratio_(best_ratio) {}
    /// Best smallest/largest singular value ratio reached.
    double best_ratio() const noexcept { return best_ratio_; }

private:
    double best_ratio_;
};

class KernelNotPdError : public DomainError {
public:
    using DomainError::DomainError;
};

class RefuseToSolveError : public DomainError {
public:
    using DomainError::DomainError;
};

class NumericalError : public DomainError {
public:
    using DomainError::DomainError;
};

} // namespace sact
