#include "depcon/distance.hpp"

#include "depcon/error.hpp"
#include "depcon/numeric.hpp"

namespace depcon {

DistanceProfile::DistanceProfile(const Dataset& data)
    : values_(data.values()),
      row_means_(data.values().rows(), data.values().cols()),
      grand_means_(data.values().cols()) {
    const std::size_t rows = n();
    const auto denom = static_cast<double>(rows);
    for (std::size_t j = 0; j < m(); ++j) {
        const auto col = values_.col(static_cast<Eigen::Index>(j));
        if (col.maxCoeff() - col.minCoeff() <= 0.0) {
            throw ConstantFeatureError(j, data.feature_names().empty() ? std::string{} : data.feature_names()[j]);
        }
        CompensatedSum grand;
        for (std::size_t i = 0; i < rows; ++i) {
            CompensatedSum row;
            for (std::size_t k = 0; k < rows; ++k) {
                row.add(distance(i, k, j));
            }
            const double mean = row.value() / denom;
            row_means_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mean;
            grand.add(mean);
        }
        grand_means_(static_cast<Eigen::Index>(j)) = grand.value() / denom;
    }
}

void DistanceProfile::slice(std::size_t i, Scaling scaling, Eigen::MatrixXd& out) const {
    out.resize(values_.rows(), values_.cols());
    for (std::size_t j = 0; j < m(); ++j) {
        for (std::size_t k = 0; k < n(); ++k) {
            out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
                scaling == Scaling::Standardized ? standardized(i, k, j) : centered(i, k, j);
        }
    }
}

Eigen::MatrixXd CenteredDistanceTensor::slice(std::size_t i, Scaling scaling) const {
    const auto& source = scaling == Scaling::Standardized ? z : c;
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
        out.col(static_cast<Eigen::Index>(j)) = source[j].row(static_cast<Eigen::Index>(i)).transpose();
    }
    return out;
}

CenteredDistanceTensor distance_tensor(const DistanceProfile& profile) {
    CenteredDistanceTensor t;
    t.n = profile.n();
    t.m = profile.m();
    t.feature_mean_distance = profile.grand_means();
    const auto rows = static_cast<Eigen::Index>(t.n);
    t.d.assign(t.m, Eigen::MatrixXd(rows, rows));
    t.c.assign(t.m, Eigen::MatrixXd(rows, rows));
    t.z.assign(t.m, Eigen::MatrixXd(rows, rows));
    for (std::size_t j = 0; j < t.m; ++j) {
        for (std::size_t k = 0; k < t.n; ++k) {
            for (std::size_t i = 0; i < t.n; ++i) {
                const auto ei = static_cast<Eigen::Index>(i);
                const auto ek = static_cast<Eigen::Index>(k);
                t.d[j](ei, ek) = profile.distance(i, k, j);
                t.c[j](ei, ek) = profile.centered(i, k, j);
                t.z[j](ei, ek) = profile.standardized(i, k, j);
            }
        }
    }
    return t;
}

CenteredDistanceTensor distance_tensor(const Dataset& data) { return distance_tensor(DistanceProfile(data)); }

std::size_t tensor_bytes(std::size_t n, std::size_t m) noexcept { return 3 * n * n * m * sizeof(double); }

} // namespace depcon
