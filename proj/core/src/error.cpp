#include "depcon/error.hpp"

namespace depcon {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::FileNotFound: return "FileNotFound";
        case ErrorKind::RaggedRows: return "RaggedRows";
        case ErrorKind::NonNumericCell: return "NonNumericCell";
        case ErrorKind::NonFiniteValue: return "NonFiniteValue";
        case ErrorKind::TooFewSamples: return "TooFewSamples";
        case ErrorKind::TooFewFeatures: return "TooFewFeatures";
        case ErrorKind::ConstantFeature: return "ConstantFeature";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::IndexOutOfBounds: return "IndexOutOfBounds";
        case ErrorKind::NotSquare: return "NotSquare";
        case ErrorKind::InvalidVertex: return "InvalidVertex";
        case ErrorKind::InvalidGraph: return "InvalidGraph";
        case ErrorKind::PairAdjacentInBase: return "PairAdjacentInBase";
        case ErrorKind::OddModelCountForNonlinear: return "OddModelCountForNonlinear";
        case ErrorKind::KTooLarge: return "KTooLarge";
        case ErrorKind::EmptyClusterUnrecoverable: return "EmptyClusterUnrecoverable";
        case ErrorKind::DegenerateLabels: return "DegenerateLabels";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::InvalidFormat: return "InvalidFormat";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::FileNotFound: return 3;
        case ErrorKind::RaggedRows: return 4;
        case ErrorKind::NonNumericCell: return 5;
        case ErrorKind::NonFiniteValue: return 6;
        case ErrorKind::TooFewSamples: return 7;
        case ErrorKind::TooFewFeatures: return 8;
        case ErrorKind::ConstantFeature: return 9;
        case ErrorKind::DimensionMismatch: return 10;
        case ErrorKind::OutOfRange: return 11;
        case ErrorKind::IndexOutOfBounds: return 12;
        case ErrorKind::NotSquare: return 13;
        case ErrorKind::InvalidVertex: return 14;
        case ErrorKind::InvalidGraph: return 15;
        case ErrorKind::PairAdjacentInBase: return 16;
        case ErrorKind::OddModelCountForNonlinear: return 17;
        case ErrorKind::KTooLarge: return 18;
        case ErrorKind::EmptyClusterUnrecoverable: return 19;
        case ErrorKind::DegenerateLabels: return 20;
        case ErrorKind::LengthMismatch: return 21;
        case ErrorKind::RankDeficient: return 22;
        case ErrorKind::InvalidFormat: return 23;
        case ErrorKind::IoError: return 24;
    }
    return 1;
}

NonNumericCellError::NonNumericCellError(std::size_t row, std::size_t col, const std::string& cell)
    : Error(ErrorKind::NonNumericCell,
            "row " + std::to_string(row) + ", column " + std::to_string(col) + ": '" + cell + "'"),
      row_(row), col_(col) {}

ConstantFeatureError::ConstantFeatureError(std::size_t feature, const std::string& name)
    : Error(ErrorKind::ConstantFeature,
            "feature " + std::to_string(feature) + (name.empty() ? "" : " ('" + name + "')") +
                " has no spread"),
      feature_(feature) {}

} // namespace depcon
