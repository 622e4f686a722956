#pragma once

#include <stdexcept>
#include <string>

namespace hht {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (CSV rows, gaps, invariants).
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid argument or configuration value.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A candidate series has too few extrema for envelope construction.
class InsufficientExtrema : public Error {
public:
    using Error::Error;
};

/// Tensor shapes disagree (parameters, caches, checkpoints).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// NaN or infinity encountered where finite values are required.
class NumericError : public Error {
public:
    using Error::Error;
};

/// An error raised inside a pipeline stage, tagged with the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace hht
