#pragma once

#include <stdexcept>
#include <string>

namespace sesf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time pair with t < s, or a negative time.
class TimeOrderError : public Error {
public:
    using Error::Error;
};

/// Constants or arguments outside the range their definition allows.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A cocycle or operator produced a non-finite value, or was applied to a zero vector.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Malformed analysis configuration. Carries the offending line and field.
class ConfigError : public Error {
public:
    ConfigError(int line, std::string field, const std::string& what)
        : Error((line > 0 ? "config line " + std::to_string(line) : std::string("config")) +
                (field.empty() ? "" : ", field '" + field + "'") + ": " + what),
          line_(line), field_(std::move(field)), message_(what) {}

    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }
    /// The message without the line and field prefix.
    const std::string& message() const noexcept { return message_; }

private:
    int line_;
    std::string field_;
    std::string message_;
};

}  // namespace sesf
