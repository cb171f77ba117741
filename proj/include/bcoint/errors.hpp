#pragma once

#include <stdexcept>
#include <string>

namespace bcoint {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Errors caused by malformed or unusable input data. The CLI maps these
/// to exit code 2.
class DataError : public Error {
public:
    using Error::Error;
};

/// Errors raised when a computation cannot be completed numerically.
/// The CLI maps these to exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

class DimensionError : public DataError {
public:
    using DataError::DataError;
};

class InsufficientData : public DataError {
public:
    using DataError::DataError;
};

class ParseError : public DataError {
public:
    using DataError::DataError;
};

class MissingDataError : public DataError {
public:
    using DataError::DataError;
};

class NumericalError : public NumericError {
public:
    using NumericError::NumericError;
};

class DegenerateError : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularCovariance : public NumericError {
public:
    using NumericError::NumericError;
};

class CollinearRegressors : public NumericError {
public:
    using NumericError::NumericError;
};

class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};

class LimitDiverged : public NumericError {
public:
    using NumericError::NumericError;
};

class GridTooNarrow : public NumericError {
public:
    using NumericError::NumericError;
};

class ChainFailed : public NumericError {
public:
    using NumericError::NumericError;
};

class DegenerateFit : public NumericError {
public:
    using NumericError::NumericError;
};

class GenerationStalled : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace bcoint
