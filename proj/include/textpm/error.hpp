#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace textpm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input row; carries the 1-based line number of the offending row.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class SchemaError : public Error { using Error::Error; };
class BoundsError : public Error { using Error::Error; };
class SplitError : public Error { using Error::Error; };
class FitError : public Error { using Error::Error; };
class ParamError : public Error { using Error::Error; };
class EncodingError : public Error { using Error::Error; };
class TrainingError : public Error { using Error::Error; };
class LengthError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };

/// Persisted file written by a different format version.
class VersionError : public Error { using Error::Error; };

/// Persisted file is truncated or otherwise unreadable.
class CorruptError : public Error { using Error::Error; };

}  // namespace textpm
