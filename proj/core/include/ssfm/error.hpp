#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssfm {

/// Base of every error the library throws on contract violations.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed market or fraction text. line() is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// A value violates a structural invariant (quota overrun, worker assigned twice, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Brute-force enumeration refused because the candidate space exceeds its cap.
class EnumerationCapExceeded : public Error {
public:
    using Error::Error;
};

/// A library invariant that should be impossible on valid input was broken.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace ssfm
