#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracstep {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Index or length outside the range of a table or sequence.
class IndexError : public Error {
public:
    using Error::Error;
};

/// An iterative evaluation hit its iteration cap before reaching tolerance.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Weight table failed its sum-to-zero check; indicates a formula bug.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class NewtonDiverged : public Error {
public:
    NewtonDiverged(std::size_t step, double residual)
        : Error("Newton iteration diverged at step " + std::to_string(step) +
                " (residual " + std::to_string(residual) + ")"),
          step_(step), residual_(residual) {}

    std::size_t step() const noexcept { return step_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t step_;
    double residual_;
};

/// The implicit step's pivot omega_0 - dt^alpha * lambda vanished.
class PivotBreakdown : public Error {
public:
    PivotBreakdown(std::size_t step, double pivot)
        : Error("pivot breakdown at step " + std::to_string(step) +
                " (|pivot| = " + std::to_string(pivot) + ")"),
          step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Syntax error in an expression, located by byte offset into the source.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& message)
        : Error("parse error at offset " + std::to_string(offset) + ": " + message),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Runtime failure while evaluating a parsed expression.
class EvalError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration document.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace fracstep
