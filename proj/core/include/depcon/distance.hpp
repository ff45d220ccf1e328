#pragma once

#include "depcon/dataset.hpp"

#include <Eigen/Core>

#include <vector>

namespace depcon {

/// Which per-feature distance slices feed the dependence contribution map.
enum class Scaling {
    Standardized, ///< doubly-centered distances divided by the feature's mean distance
    Centered,     ///< doubly-centered distances only
};

/// Compact form of the centered distance tensor.
///
/// Stores the data plus per-feature row means and grand means of the pairwise
/// distance matrices, which is enough to regenerate any n x m slice
/// C[i, ., .] or Z[i, ., .] in O(n m) without holding the n x n x m tensor.
/// Every entry is produced by `centered()`, so materialized and regenerated
/// values are bit-identical.
class DistanceProfile {
public:
    /// Throws ConstantFeatureError when any column has zero spread.
    explicit DistanceProfile(const Dataset& data);

    std::size_t n() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t m() const noexcept { return static_cast<std::size_t>(values_.cols()); }

    /// row_means()(i, j) is the mean over i' of |S(i,j) - S(i',j)|.
    const Eigen::MatrixXd& row_means() const noexcept { return row_means_; }
    /// grand_means()(j) is the mean of all n^2 pairwise distances of feature j.
    const Eigen::VectorXd& grand_means() const noexcept { return grand_means_; }

    double distance(std::size_t i, std::size_t k, std::size_t j) const noexcept {
        const double diff = values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                            values_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
        return diff < 0 ? -diff : diff;
    }

    /// Doubly-centered distance C(i, k, j); exactly symmetric in (i, k).
    double centered(std::size_t i, std::size_t k, std::size_t j) const noexcept {
        const auto ej = static_cast<Eigen::Index>(j);
        return (distance(i, k, j) -
                (row_means_(static_cast<Eigen::Index>(i), ej) + row_means_(static_cast<Eigen::Index>(k), ej))) +
               grand_means_(ej);
    }

    double standardized(std::size_t i, std::size_t k, std::size_t j) const noexcept {
        return centered(i, k, j) / grand_means_(static_cast<Eigen::Index>(j));
    }

    /// Writes the n x m slice fixing the first index at sample i into `out`.
    void slice(std::size_t i, Scaling scaling, Eigen::MatrixXd& out) const;

private:
    Eigen::MatrixXd values_;
    Eigen::MatrixXd row_means_;
    Eigen::VectorXd grand_means_;
};

/// Fully materialized pairwise distance tensor with its centered and
/// standardized forms; slices are indexed by feature.
struct CenteredDistanceTensor {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<Eigen::MatrixXd> d; ///< d[j](i, i') = |S(i,j) - S(i',j)|
    std::vector<Eigen::MatrixXd> c; ///< doubly-centered d[j]
    std::vector<Eigen::MatrixXd> z; ///< c[j] / feature_mean_distance(j)
    Eigen::VectorXd feature_mean_distance;

    /// The n x m slice fixing the first index at sample i.
    Eigen::MatrixXd slice(std::size_t i, Scaling scaling = Scaling::Standardized) const;
};

CenteredDistanceTensor distance_tensor(const Dataset& data);
CenteredDistanceTensor distance_tensor(const DistanceProfile& profile);

/// Bytes needed to materialize the d, c and z tensors for an n x m dataset.
std::size_t tensor_bytes(std::size_t n, std::size_t m) noexcept;

} // namespace depcon
