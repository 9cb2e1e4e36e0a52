#pragma once

#include <stdexcept>
#include <string>

namespace starfield {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int column, std::string token);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& token() const noexcept { return token_; }

private:
    int line_;
    int column_;
    std::string token_;
};

/// Shape, dimension or context mismatch between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Odd value bound to an even generator or vice versa.
class ParityError : public Error {
public:
    using Error::Error;
};

/// An operation's precondition on its input does not hold.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Expression grew past STARFIELD_MAX_TERMS monomials.
class TermLimitError : public Error {
public:
    using Error::Error;
};

} // namespace starfield
