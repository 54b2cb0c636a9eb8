#pragma once

#include <stdexcept>
#include <string>

namespace phdnet {

/// Process exit codes shared by every subcommand.
enum class ExitCode : int {
    ok = 0,
    config = 1,
    data = 2,
    numeric = 3,
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual ExitCode exit_code() const noexcept = 0;
};

/// Bad flags, schema mismatches, unsorted boundaries, unknown formats.
class ConfigError : public Error {
public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::config; }
};

/// Unreadable inputs and data that cannot support the requested statistic.
class DataError : public Error {
public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::data; }
};

class DimensionError : public DataError {
public:
    using DataError::DataError;
};

/// A statistic whose defining formula divides by zero (zero variance, zero residuals).
class UndefinedStatisticError : public DataError {
public:
    using DataError::DataError;
};

class NumericError : public Error {
public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::numeric; }
};

class SingularMatrixError : public NumericError {
public:
    using NumericError::NumericError;
};

class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace phdnet
