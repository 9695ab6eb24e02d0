#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdde {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arguments outside the region where an operation is defined
/// (e.g. the boundary curve queried with b >= -|a|).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A bracketing search found no sign change.
class NoRootError : public Error {
public:
    using Error::Error;
};

/// Invalid simulation grid, embedding configuration or run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A series is too short for the requested operation.
class LengthError : public Error {
public:
    using Error::Error;
};

/// Input carries no usable information (e.g. a constant series).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Malformed right-hand-side expression. `offset()` is a byte offset into the source text.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found);

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// Identifier other than `x` or `xd` in a right-hand-side expression.
class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(std::size_t offset, std::string name);

    std::size_t offset() const noexcept { return offset_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::size_t offset_;
    std::string name_;
};

} // namespace fdde
