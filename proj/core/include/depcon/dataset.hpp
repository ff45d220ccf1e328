#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace depcon {

/// An n x m matrix of samples (rows) by features (columns).
///
/// Construction validates the invariants: n >= 2, m >= 2, every value finite,
/// and either no feature names or exactly m of them.
class Dataset {
public:
    explicit Dataset(Eigen::MatrixXd values, std::vector<std::string> feature_names = {});

    const Eigen::MatrixXd& values() const noexcept { return values_; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }

    std::size_t n() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t m() const noexcept { return static_cast<std::size_t>(values_.cols()); }

    /// Name of feature j, or its decimal index when the dataset is unnamed.
    std::string feature_name(std::size_t j) const;

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> feature_names_;
};

/// Parses comma-separated text: rows are samples, columns features. When
/// `has_header` is set, the first line supplies the feature names.
Dataset load_csv(std::istream& source, bool has_header);

/// Parses {"feature_names": [...], "rows": [[...], ...]}; feature_names is optional.
Dataset load_json(std::istream& source);

/// Reads a dataset file, choosing JSON for a ".json" extension and CSV otherwise.
Dataset load_dataset(const std::filesystem::path& path, bool has_header);

/// Writes the dataset as CSV with a header line when feature names are present.
void write_csv(std::ostream& out, const Dataset& data);

/// Writes a real matrix as headerless CSV using shortest round-trip formatting.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix);

/// Reads a headerless numeric CSV matrix of any shape (used for Gram inputs).
Eigen::MatrixXd load_matrix_csv(std::istream& source);

/// Shortest decimal representation that parses back to exactly `value`.
std::string format_double(double value);

} // namespace depcon
