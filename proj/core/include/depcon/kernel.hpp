#pragma once

#include "depcon/dataset.hpp"
#include "depcon/distance.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <string_view>

namespace depcon {

/// 1 - alpha quantile of the chi-square distribution with one degree of freedom,
/// i.e. q with P(chi2_1 <= q) = p. Requires 0 < p < 1.
double chi2_quantile_1df(double p);

/// How the critical value offset scales with the sample count.
enum class ScaleConvention {
    /// Off-diagonal offset chi2_{1-alpha}(1) / n. Summed over samples this
    /// rejects when n * (n V^2 / S2) exceeds the quantile.
    ChiSquareOverN,
    /// Off-diagonal offset chi2_{1-alpha}(1). Summed over samples this rejects
    /// exactly when n V^2 / S2 exceeds the quantile (the Szekely-Rizzo rule).
    SzekelyRizzo,
};

std::string_view to_string(ScaleConvention convention) noexcept;
/// Accepts "szekely-rizzo" and "chi2-over-n"; throws OutOfRange otherwise.
ScaleConvention parse_scale_convention(std::string_view text);

/// Critical value matrix T: zero diagonal, one shared off-diagonal value.
struct CriticalMatrix {
    double alpha = 0.0;
    double chi2_quantile = 0.0;
    std::size_t m = 0;
    double off_diagonal = 0.0;
    ScaleConvention scale_convention = ScaleConvention::SzekelyRizzo;

    Eigen::MatrixXd matrix() const;
    /// Squared Frobenius norm, m (m - 1) t^2.
    double frobenius_squared() const noexcept;

    /// All-zero offset, used to recover the plain distance covariance.
    static CriticalMatrix zero(std::size_t m);
};

CriticalMatrix critical_matrix(std::size_t m, std::size_t n, double alpha, ScaleConvention convention);

/// Image of one sample under the dependence contribution map: an m x m
/// symmetric matrix Z_iᵀ Z_i - T, where Z_i is the n x m distance slice of sample i.
struct DepConMatrix {
    Eigen::MatrixXd values;
    std::size_t sample_index = 0;
};

/// Z_iᵀ Z_i - T for an n x m slice. Symmetric by construction.
Eigen::MatrixXd phi_from_slice(const Eigen::MatrixXd& slice, const CriticalMatrix& t);

DepConMatrix phi_map(const CenteredDistanceTensor& tensor, const CriticalMatrix& t, std::size_t i,
                     Scaling scaling = Scaling::Standardized);
DepConMatrix phi_map(const DistanceProfile& profile, const CriticalMatrix& t, std::size_t i,
                     Scaling scaling = Scaling::Standardized);

/// Matrix of squared sample distance covariances, (1/n^2) Lᵀ L with
/// L = (vec C^1, ..., vec C^m).
struct DistanceCovMatrix {
    Eigen::MatrixXd values;
};

DistanceCovMatrix distance_cov_matrix(const Dataset& data);
DistanceCovMatrix distance_cov_matrix(const DistanceProfile& profile);

/// Sum over samples of the dependence contribution map, accumulated with
/// compensated summation over all n^2 distance products.
Eigen::MatrixXd aggregate_phi(const DistanceProfile& profile, const CriticalMatrix& t,
                              Scaling scaling = Scaling::Standardized);

/// Frobenius inner product <Z_aᵀZ_a - T_a, Z_bᵀZ_b - T_b>, with the leading
/// term evaluated as ||Z_a Z_bᵀ||_F^2.
double gamma_from_slices(const Eigen::MatrixXd& za, const Eigen::MatrixXd& zb, const CriticalMatrix& ta,
                         const CriticalMatrix& tb);

/// Variant whose leading term is (vec(Z_a)ᵀ vec(Z_b))^2 = (tr Z_aᵀ Z_b)^2.
/// Agrees with gamma_from_slices only in special cases (e.g. rank-one
/// slices with T = 0); it is not an inner product of the mapped matrices.
double gamma_vectorized_expansion(const Eigen::MatrixXd& za, const Eigen::MatrixXd& zb, const CriticalMatrix& t);

double gamma_kernel(const CenteredDistanceTensor& a, const CenteredDistanceTensor& b, const CriticalMatrix& t,
                    std::size_t i, std::size_t i_prime);

struct KernelValue {
    double value = 0.0;
    /// Set when either sample maps to a matrix with Frobenius norm below 1e-12;
    /// the value is then defined as 0.
    bool degenerate = false;
};

KernelValue kappa_kernel(const CenteredDistanceTensor& a, const CenteredDistanceTensor& b, const CriticalMatrix& t,
                         std::size_t i, std::size_t i_prime);

/// arccos of a kernel value, in [0, pi]. Values beyond [-1, 1] by more than
/// 1e-9 raise OutOfRange; smaller excursions are clamped.
double kernel_distance(double kappa_value);

struct GramOptions {
    double alpha = 0.1;
    ScaleConvention convention = ScaleConvention::SzekelyRizzo;
    /// 0 selects default_thread_count().
    std::size_t threads = 0;
    /// Above this many bytes the distance tensor is not materialized; slices
    /// are regenerated per row block instead. Results are identical either way.
    std::size_t memory_budget_bytes = std::size_t{512} << 20;
};

struct GramMatrix {
    Eigen::MatrixXd values;
    Eigen::VectorXd self_norms_a; ///< ||phi[a_i]||_F
    Eigen::VectorXd self_norms_b;
    std::size_t degenerate_count = 0;
};

/// Square Gram of kappa values over one dataset.
GramMatrix gram_matrix(const Dataset& data, const GramOptions& options = {});
/// Cross Gram between two datasets with the same feature count. Each side is
/// mapped with its own distance tensor and critical matrix.
GramMatrix gram_matrix(const Dataset& a, const Dataset& b, const GramOptions& options = {});

/// Feature vectors of the dependence contribution map: row i holds the upper
/// triangle of phi[S_i] (diagonal first, then off-diagonal row-major), so
/// <phi_i, phi_k>_F = sum_p w_p F(i,p) F(k,p) with w = phi_feature_weights(m).
Eigen::MatrixXd phi_features(const Dataset& data, const CriticalMatrix& t, std::size_t threads = 0,
                             std::size_t memory_budget_bytes = std::size_t{512} << 20);
Eigen::VectorXd phi_feature_weights(std::size_t m);

} // namespace depcon
