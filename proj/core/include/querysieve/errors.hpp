#pragma once

#include <stdexcept>
#include <string>

namespace querysieve {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A column, feature name, or rule does not line up with the schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A single input row/line is unusable (bad number, missing field, ...).
class RowError : public Error {
public:
    RowError(std::size_t row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

/// Two records claim the same id.
class DuplicateIdError : public Error {
public:
    using Error::Error;
};

/// A parameter is outside its legal range.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// The corpus is empty where at least one record is required.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// The corpus is too small for the requested computation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Detector results being combined do not come from the same corpus.
class CorpusMismatchError : public Error {
public:
    using Error::Error;
};

/// File or stream level failure.
class IoError : public Error {
public:
    using Error::Error;
};

/// Run configuration is invalid (unknown key, bad value, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace querysieve
