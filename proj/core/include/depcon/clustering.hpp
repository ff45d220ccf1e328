#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace depcon::cluster {

enum class Init { Random, PlusPlus };

std::string_view to_string(Init init) noexcept;
Init parse_init(std::string_view text);

struct KMeansOptions {
    Init init = Init::PlusPlus;
    std::size_t max_iter = 300;
    std::size_t restarts = 10;
    std::uint64_t seed = 0;
    /// 0 selects default_thread_count().
    std::size_t threads = 0;
};

struct ClusterAssignment {
    std::vector<int> labels;
    std::size_t k = 0;
    /// Sum over samples of the squared feature-space distance to the cluster mean.
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    /// Objective after the initial assignment and after every iteration.
    std::vector<double> objective_trace;
    /// Index of the winning restart.
    std::size_t restart = 0;
};

/// Unweighted kernel k-means on a precomputed Gram matrix, best of
/// `restarts` runs by objective (ties go to the earlier restart).
ClusterAssignment kernel_kmeans(const Eigen::MatrixXd& gram, std::size_t k, const KMeansOptions& options = {});

/// One kernel k-means run whose initial assignment sends each sample to the
/// nearest of the given seed samples, as Lloyd's algorithm does from centroids
/// placed on those samples.
ClusterAssignment kernel_kmeans_from_seeds(const Eigen::MatrixXd& gram, std::span<const std::size_t> seeds,
                                           std::size_t max_iter = 300, std::size_t threads = 0);

/// Calinski-Harabasz index from kernel sums: (B / (k - 1)) / (W / (n - k)).
/// Returns +infinity when the within-cluster dispersion is zero.
double variance_ratio_criterion(const Eigen::MatrixXd& gram, std::span<const int> labels);

/// Mean silhouette with pairwise distance arccos of the normalized kernel value.
double silhouette_score(const Eigen::MatrixXd& gram, std::span<const int> labels);

/// Mean silhouette with Euclidean distances between the rows of `points`.
double silhouette_euclidean(const Eigen::MatrixXd& points, std::span<const int> labels);

enum class Criterion { Vrc, Silhouette };

std::string_view to_string(Criterion criterion) noexcept;
Criterion parse_criterion(std::string_view text);

struct KScore {
    std::size_t k = 0;
    double score = 0.0;
    double objective = 0.0;
};

struct KSelection {
    std::size_t best_k = 0;
    ClusterAssignment best;
    std::vector<KScore> scores;
};

/// Clusters at every k in [k_min, k_max] and keeps the highest score, ties
/// going to the smaller k.
KSelection select_k(const Eigen::MatrixXd& gram, std::size_t k_min, std::size_t k_max, Criterion criterion,
                    const KMeansOptions& options = {});

/// Permutation-model adjusted Rand index. Throws LengthMismatch.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

/// Plain inner-product Gram X Xᵀ.
Eigen::MatrixXd linear_gram(const Eigen::MatrixXd& x);

/// Columns centered and scaled to unit population variance.
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& x);

} // namespace depcon::cluster
