#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fewsq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation (bad symbol, non-uniform morphism, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
public:
    using Error::Error;
};

/// A text file could not be parsed. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A configured resource bound (state count, node count) was exceeded.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// Learned structure failed to reproduce the data it was learned from.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

} // namespace fewsq
