#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace depcon {

/// Error classes raised by the library. Each maps to a stable CLI exit code.
enum class ErrorKind {
    FileNotFound,
    RaggedRows,
    NonNumericCell,
    NonFiniteValue,
    TooFewSamples,
    TooFewFeatures,
    ConstantFeature,
    DimensionMismatch,
    OutOfRange,
    IndexOutOfBounds,
    NotSquare,
    InvalidVertex,
    InvalidGraph,
    PairAdjacentInBase,
    OddModelCountForNonlinear,
    KTooLarge,
    EmptyClusterUnrecoverable,
    DegenerateLabels,
    LengthMismatch,
    RankDeficient,
    InvalidFormat,
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Process exit code for an error class; 0 and 1 are reserved for success and
/// unexpected failures, 2 for command-line usage errors.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised for a cell that does not parse as a number; indices are 0-based over data rows.
class NonNumericCellError : public Error {
public:
    NonNumericCellError(std::size_t row, std::size_t col, const std::string& cell);

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

/// Raised when a feature column has zero spread, so standardization would divide by 0.
class ConstantFeatureError : public Error {
public:
    explicit ConstantFeatureError(std::size_t feature, const std::string& name = {});

    std::size_t feature() const noexcept { return feature_; }

private:
    std::size_t feature_;
};

} // namespace depcon
