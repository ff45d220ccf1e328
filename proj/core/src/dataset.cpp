#include "depcon/dataset.hpp"

#include "depcon/error.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace depcon {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

// Returns false when the cell is not a complete decimal number. Textual
// infinities and NaNs parse successfully and are caught by validation.
bool parse_cell(std::string_view cell, double& out) {
    if (cell.empty()) {
        return false;
    }
    if (cell.front() == '+') {
        cell.remove_prefix(1);
    }
    const auto* first = cell.data();
    const auto* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

void validate(const Eigen::MatrixXd& values, const std::vector<std::string>& names) {
    if (values.rows() < 2) {
        throw Error(ErrorKind::TooFewSamples,
                    "need at least 2 samples, got " + std::to_string(values.rows()));
    }
    if (values.cols() < 2) {
        throw Error(ErrorKind::TooFewFeatures,
                    "need at least 2 features, got " + std::to_string(values.cols()));
    }
    if (!names.empty() && names.size() != static_cast<std::size_t>(values.cols())) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::to_string(names.size()) + " feature names for " +
                        std::to_string(values.cols()) + " columns");
    }
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
            if (!std::isfinite(values(i, j))) {
                throw Error(ErrorKind::NonFiniteValue,
                            "row " + std::to_string(i) + ", column " + std::to_string(j));
            }
        }
    }
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows, std::size_t cols) {
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return values;
}

struct ParsedCsv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::size_t cols = 0;
};

ParsedCsv parse_csv(std::istream& source, bool has_header) {
    ParsedCsv parsed;
    std::string line;
    bool have_width = false;
    bool header_pending = has_header;
    while (std::getline(source, line)) {
        if (is_blank(line)) {
            continue;
        }
        const auto cells = split_commas(line);
        if (header_pending) {
            for (const auto cell : cells) {
                parsed.header.emplace_back(cell);
            }
            parsed.cols = cells.size();
            have_width = true;
            header_pending = false;
            continue;
        }
        if (!have_width) {
            parsed.cols = cells.size();
            have_width = true;
        } else if (cells.size() != parsed.cols) {
            throw Error(ErrorKind::RaggedRows, "row " + std::to_string(parsed.rows.size()) + " has " +
                                                   std::to_string(cells.size()) + " cells, expected " +
                                                   std::to_string(parsed.cols));
        }
        std::vector<double> row(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (!parse_cell(cells[j], row[j])) {
                throw NonNumericCellError(parsed.rows.size(), j, std::string(cells[j]));
            }
        }
        parsed.rows.push_back(std::move(row));
    }
    return parsed;
}

} // namespace

Dataset::Dataset(Eigen::MatrixXd values, std::vector<std::string> feature_names)
    : values_(std::move(values)), feature_names_(std::move(feature_names)) {
    validate(values_, feature_names_);
}

std::string Dataset::feature_name(std::size_t j) const {
    return feature_names_.empty() ? std::to_string(j) : feature_names_.at(j);
}

Dataset load_csv(std::istream& source, bool has_header) {
    auto parsed = parse_csv(source, has_header);
    return Dataset(to_matrix(parsed.rows, parsed.cols), std::move(parsed.header));
}

Dataset load_json(std::istream& source) {
    nlohmann::json doc;
    try {
        source >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidFormat, e.what());
    }
    if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array()) {
        throw Error(ErrorKind::InvalidFormat, "expected an object with a \"rows\" array");
    }
    std::vector<std::string> names;
    if (doc.contains("feature_names")) {
        for (const auto& name : doc["feature_names"]) {
            names.push_back(name.get<std::string>());
        }
    }
    std::vector<std::vector<double>> rows;
    std::size_t cols = 0;
    for (const auto& row : doc["rows"]) {
        if (!row.is_array()) {
            throw Error(ErrorKind::InvalidFormat, "row " + std::to_string(rows.size()) + " is not an array");
        }
        if (rows.empty()) {
            cols = row.size();
        } else if (row.size() != cols) {
            throw Error(ErrorKind::RaggedRows, "row " + std::to_string(rows.size()) + " has " +
                                                   std::to_string(row.size()) + " cells, expected " +
                                                   std::to_string(cols));
        }
        std::vector<double> parsed(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (!row[j].is_number()) {
                throw NonNumericCellError(rows.size(), j, row[j].dump());
            }
            parsed[j] = row[j].get<double>();
        }
        rows.push_back(std::move(parsed));
    }
    return Dataset(to_matrix(rows, cols), std::move(names));
}

Dataset load_dataset(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::FileNotFound, path.string());
    }
    if (path.extension() == ".json") {
        return load_json(in);
    }
    return load_csv(in, has_header);
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix) {
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << format_double(matrix(i, j));
        }
        out << '\n';
    }
}

void write_csv(std::ostream& out, const Dataset& data) {
    if (!data.feature_names().empty()) {
        for (std::size_t j = 0; j < data.m(); ++j) {
            out << (j > 0 ? "," : "") << data.feature_names()[j];
        }
        out << '\n';
    }
    write_matrix_csv(out, data.values());
}

Eigen::MatrixXd load_matrix_csv(std::istream& source) {
    auto parsed = parse_csv(source, false);
    return to_matrix(parsed.rows, parsed.cols);
}

} // namespace depcon
