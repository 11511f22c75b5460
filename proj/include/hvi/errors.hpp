#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hvi {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A point was given outside the closed unit square.
class OutOfDomain : public Error {
public:
    using Error::Error;
};

/// Malformed expression text. `column` is 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t column)
        : Error(what + " at column " + std::to_string(column)), column_(column) {}
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

class UnknownIdentifier : public ParseError {
public:
    UnknownIdentifier(const std::string& name, std::size_t column)
        : ParseError("unknown identifier '" + name + "'", column), name_(name) {}
    [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Expression evaluation produced a non-finite value.
class NumericDomainError : public Error {
public:
    explicit NumericDomainError(std::string subexpr)
        : Error("non-finite value while evaluating '" + subexpr + "'"), subexpr_(std::move(subexpr)) {}
    [[nodiscard]] const std::string& subexpression() const noexcept { return subexpr_; }

private:
    std::string subexpr_;
};

class LookupError : public Error {
public:
    using Error::Error;
};

class EllipticityError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Linear solver failure; carries the last relative residual reached.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// The multiplier iteration hit its iteration cap.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, std::vector<double> history)
        : Error(what), history_(std::move(history)) {}
    [[nodiscard]] const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

class DiagnosticsError : public Error {
public:
    using Error::Error;
};

} // namespace hvi
