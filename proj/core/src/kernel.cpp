#include "depcon/kernel.hpp"

#include "depcon/error.hpp"
#include "depcon/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace depcon {

namespace {

constexpr double kDegenerateNorm = 1e-12;
constexpr double kKappaClampTolerance = 1e-9;

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::OutOfRange, "alpha must lie in (0, 1), got " + format_double(alpha));
    }
}

// Sum of the off-diagonal entries of ZᵀZ, i.e. <ZᵀZ, 1 1ᵀ - I>_F.
double off_diagonal_gram_sum(const Eigen::MatrixXd& z) {
    double total = 0.0;
    for (Index k = 0; k < z.rows(); ++k) {
        const double row_sum = z.row(k).sum();
        total += row_sum * row_sum - z.row(k).squaredNorm();
    }
    return total;
}

double weighted_dot(const Eigen::MatrixXd& fa, Index ia, const Eigen::MatrixXd& fb, Index ib, Index diag) {
    double d = 0.0;
    for (Index p = 0; p < diag; ++p) {
        d += fa(ia, p) * fb(ib, p);
    }
    double off = 0.0;
    for (Index p = diag; p < fa.cols(); ++p) {
        off += fa(ia, p) * fb(ib, p);
    }
    return d + 2.0 * off;
}

void check_feature_count(const Dataset& a, const Dataset& b) {
    if (a.m() != b.m()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "feature counts differ: " + std::to_string(a.m()) + " vs " + std::to_string(b.m()));
    }
}

void check_tensor_pair(const CenteredDistanceTensor& a, const CenteredDistanceTensor& b, const CriticalMatrix& t) {
    if (a.m != b.m || t.m != a.m) {
        throw Error(ErrorKind::DimensionMismatch, "tensors and critical matrix must share the feature count");
    }
}

void check_index(std::size_t i, std::size_t n) {
    if (i >= n) {
        throw Error(ErrorKind::IndexOutOfBounds, "sample " + std::to_string(i) + " of " + std::to_string(n));
    }
}

} // namespace

double chi2_quantile_1df(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorKind::OutOfRange, "probability must lie in (0, 1), got " + format_double(p));
    }
    // P(chi2_1 <= q) = erf(sqrt(q / 2)); solve for y = sqrt(q / 2) by bisection,
    // comparing in the tail that keeps full relative precision.
    const bool upper = p > 0.5;
    const double target = upper ? 1.0 - p : p;
    double lo = 0.0;
    double hi = 40.0;
    for (int iter = 0; iter < 2000 && hi - lo > 0.0; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const bool below = upper ? std::erfc(mid) > target : std::erf(mid) < target;
        (below ? lo : hi) = mid;
    }
    const double y = 0.5 * (lo + hi);
    return 2.0 * y * y;
}

std::string_view to_string(ScaleConvention convention) noexcept {
    switch (convention) {
        case ScaleConvention::ChiSquareOverN: return "chi2-over-n";
        case ScaleConvention::SzekelyRizzo: return "szekely-rizzo";
    }
    return "unknown";
}

ScaleConvention parse_scale_convention(std::string_view text) {
    if (text == "szekely-rizzo") {
        return ScaleConvention::SzekelyRizzo;
    }
    if (text == "chi2-over-n") {
        return ScaleConvention::ChiSquareOverN;
    }
    throw Error(ErrorKind::OutOfRange, "unknown scale convention '" + std::string(text) + "'");
}

Eigen::MatrixXd CriticalMatrix::matrix() const {
    Eigen::MatrixXd t = Eigen::MatrixXd::Constant(idx(m), idx(m), off_diagonal);
    t.diagonal().setZero();
    return t;
}

double CriticalMatrix::frobenius_squared() const noexcept {
    return static_cast<double>(m * (m - 1)) * off_diagonal * off_diagonal;
}

CriticalMatrix CriticalMatrix::zero(std::size_t m) {
    CriticalMatrix t;
    t.alpha = 1.0;
    t.m = m;
    return t;
}

CriticalMatrix critical_matrix(std::size_t m, std::size_t n, double alpha, ScaleConvention convention) {
    if (m < 2 || n < 2) {
        throw Error(ErrorKind::OutOfRange, "critical matrix needs m >= 2 and n >= 2");
    }
    check_alpha(alpha);
    CriticalMatrix t;
    t.alpha = alpha;
    t.m = m;
    t.chi2_quantile = chi2_quantile_1df(1.0 - alpha);
    t.scale_convention = convention;
    t.off_diagonal =
        convention == ScaleConvention::ChiSquareOverN ? t.chi2_quantile / static_cast<double>(n) : t.chi2_quantile;
    return t;
}

Eigen::MatrixXd phi_from_slice(const Eigen::MatrixXd& slice, const CriticalMatrix& t) {
    const Index m = slice.cols();
    if (idx(t.m) != m) {
        throw Error(ErrorKind::DimensionMismatch, "critical matrix does not match the slice width");
    }
    Eigen::MatrixXd phi(m, m);
    for (Index j = 0; j < m; ++j) {
        for (Index l = j; l < m; ++l) {
            const double v = slice.col(j).dot(slice.col(l)) - (j == l ? 0.0 : t.off_diagonal);
            phi(j, l) = v;
            phi(l, j) = v;
        }
    }
    return phi;
}

DepConMatrix phi_map(const CenteredDistanceTensor& tensor, const CriticalMatrix& t, std::size_t i, Scaling scaling) {
    check_index(i, tensor.n);
    return {phi_from_slice(tensor.slice(i, scaling), t), i};
}

DepConMatrix phi_map(const DistanceProfile& profile, const CriticalMatrix& t, std::size_t i, Scaling scaling) {
    check_index(i, profile.n());
    Eigen::MatrixXd slice;
    profile.slice(i, scaling, slice);
    return {phi_from_slice(slice, t), i};
}

Eigen::MatrixXd aggregate_phi(const DistanceProfile& profile, const CriticalMatrix& t, Scaling scaling) {
    const std::size_t n = profile.n();
    const std::size_t m = profile.m();
    if (t.m != m) {
        throw Error(ErrorKind::DimensionMismatch, "critical matrix does not match the profile");
    }
    std::vector<CompensatedSum> sums(m * m);
    std::vector<double> row(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < m; ++j) {
                row[j] = scaling == Scaling::Standardized ? profile.standardized(i, k, j) : profile.centered(i, k, j);
            }
            for (std::size_t j = 0; j < m; ++j) {
                for (std::size_t l = j; l < m; ++l) {
                    sums[j * m + l].add(row[j] * row[l]);
                }
            }
        }
    }
    const double offset = static_cast<double>(n) * t.off_diagonal;
    Eigen::MatrixXd out(idx(m), idx(m));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t l = j; l < m; ++l) {
            const double v = sums[j * m + l].value() - (j == l ? 0.0 : offset);
            out(idx(j), idx(l)) = v;
            out(idx(l), idx(j)) = v;
        }
    }
    return out;
}

DistanceCovMatrix distance_cov_matrix(const DistanceProfile& profile) {
    const auto n = static_cast<double>(profile.n());
    Eigen::MatrixXd values =
        aggregate_phi(profile, CriticalMatrix::zero(profile.m()), Scaling::Centered) / (n * n);
    return {values.cwiseMax(0.0)};
}

DistanceCovMatrix distance_cov_matrix(const Dataset& data) { return distance_cov_matrix(DistanceProfile(data)); }

double gamma_from_slices(const Eigen::MatrixXd& za, const Eigen::MatrixXd& zb, const CriticalMatrix& ta,
                         const CriticalMatrix& tb) {
    if (za.cols() != zb.cols() || idx(ta.m) != za.cols() || idx(tb.m) != za.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "slices and critical matrices must share the feature count");
    }
    const double cross = (za * zb.transpose()).squaredNorm();
    const double a_t = off_diagonal_gram_sum(za);
    const double b_t = off_diagonal_gram_sum(zb);
    const auto pairs = static_cast<double>(ta.m * (ta.m - 1));
    return cross - tb.off_diagonal * a_t - ta.off_diagonal * b_t + pairs * ta.off_diagonal * tb.off_diagonal;
}

double gamma_vectorized_expansion(const Eigen::MatrixXd& za, const Eigen::MatrixXd& zb, const CriticalMatrix& t) {
    if (za.rows() != zb.rows() || za.cols() != zb.cols() || idx(t.m) != za.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "vectorized expansion needs equally shaped slices");
    }
    const double inner = za.cwiseProduct(zb).sum();
    return inner * inner - t.off_diagonal * off_diagonal_gram_sum(za) - t.off_diagonal * off_diagonal_gram_sum(zb) +
           t.frobenius_squared();
}

double gamma_kernel(const CenteredDistanceTensor& a, const CenteredDistanceTensor& b, const CriticalMatrix& t,
                    std::size_t i, std::size_t i_prime) {
    check_tensor_pair(a, b, t);
    check_index(i, a.n);
    check_index(i_prime, b.n);
    return gamma_from_slices(a.slice(i), b.slice(i_prime), t, t);
}

KernelValue kappa_kernel(const CenteredDistanceTensor& a, const CenteredDistanceTensor& b, const CriticalMatrix& t,
                         std::size_t i, std::size_t i_prime) {
    check_tensor_pair(a, b, t);
    check_index(i, a.n);
    check_index(i_prime, b.n);
    const auto za = a.slice(i);
    const auto zb = b.slice(i_prime);
    const double self_a = gamma_from_slices(za, za, t, t);
    const double self_b = gamma_from_slices(zb, zb, t, t);
    if (self_a < kDegenerateNorm * kDegenerateNorm || self_b < kDegenerateNorm * kDegenerateNorm) {
        return {0.0, true};
    }
    const double value = gamma_from_slices(za, zb, t, t) / (std::sqrt(self_a) * std::sqrt(self_b));
    return {std::clamp(value, -1.0, 1.0), false};
}

double kernel_distance(double kappa_value) {
    if (!(kappa_value >= -1.0 - kKappaClampTolerance && kappa_value <= 1.0 + kKappaClampTolerance)) {
        throw Error(ErrorKind::OutOfRange, "kernel value " + format_double(kappa_value) + " outside [-1, 1]");
    }
    return std::acos(std::clamp(kappa_value, -1.0, 1.0));
}

Eigen::VectorXd phi_feature_weights(std::size_t m) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(idx(m * (m + 1) / 2), 2.0);
    w.head(idx(m)).setOnes();
    return w;
}

Eigen::MatrixXd phi_features(const Dataset& data, const CriticalMatrix& t, std::size_t threads,
                             std::size_t memory_budget_bytes) {
    const std::size_t n = data.n();
    const std::size_t m = data.m();
    if (t.m != m) {
        throw Error(ErrorKind::DimensionMismatch, "critical matrix does not match the dataset");
    }
    const DistanceProfile profile(data);
    std::optional<CenteredDistanceTensor> tensor;
    if (tensor_bytes(n, m) <= memory_budget_bytes) {
        tensor = distance_tensor(profile);
    }
    Eigen::MatrixXd features(idx(n), idx(m * (m + 1) / 2));
    parallel_for_blocks(n, threads, [&](std::size_t begin, std::size_t end) {
        Eigen::MatrixXd slice;
        for (std::size_t i = begin; i < end; ++i) {
            if (tensor) {
                slice = tensor->slice(i);
            } else {
                profile.slice(i, Scaling::Standardized, slice);
            }
            const Eigen::MatrixXd phi = phi_from_slice(slice, t);
            Index p = 0;
            for (Index j = 0; j < idx(m); ++j) {
                features(idx(i), p++) = phi(j, j);
            }
            for (Index j = 0; j < idx(m); ++j) {
                for (Index l = j + 1; l < idx(m); ++l) {
                    features(idx(i), p++) = phi(j, l);
                }
            }
        }
    });
    return features;
}

namespace {

Eigen::VectorXd feature_norms(const Eigen::MatrixXd& features, Index diag) {
    Eigen::VectorXd norms(features.rows());
    for (Index i = 0; i < features.rows(); ++i) {
        norms(i) = std::sqrt(weighted_dot(features, i, features, i, diag));
    }
    return norms;
}

double cosine(double inner, double norm_a, double norm_b) {
    if (norm_a < kDegenerateNorm || norm_b < kDegenerateNorm) {
        return 0.0;
    }
    return std::clamp(inner / (norm_a * norm_b), -1.0, 1.0);
}

} // namespace

GramMatrix gram_matrix(const Dataset& data, const GramOptions& options) {
    const std::size_t n = data.n();
    const auto diag = idx(data.m());
    const auto t = critical_matrix(data.m(), n, options.alpha, options.convention);
    const Eigen::MatrixXd features = phi_features(data, t, options.threads, options.memory_budget_bytes);

    GramMatrix gram;
    gram.self_norms_a = feature_norms(features, diag);
    gram.self_norms_b = gram.self_norms_a;
    gram.values.resize(idx(n), idx(n));
    const auto& norms = gram.self_norms_a;
    parallel_for_blocks(n, options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Index ei = idx(i);
            for (Index k = 0; k < idx(n); ++k) {
                // Each unordered pair is evaluated once in a fixed order so the
                // result is exactly symmetric.
                const Index lo = std::min(ei, k);
                const Index hi = std::max(ei, k);
                if (lo == hi) {
                    gram.values(ei, ei) = norms(ei) < kDegenerateNorm ? 0.0 : 1.0;
                } else {
                    gram.values(ei, k) =
                        cosine(weighted_dot(features, lo, features, hi, diag), norms(lo), norms(hi));
                }
            }
        }
    });
    for (Index i = 0; i < idx(n); ++i) {
        gram.degenerate_count += norms(i) < kDegenerateNorm ? 1 : 0;
    }
    return gram;
}

GramMatrix gram_matrix(const Dataset& a, const Dataset& b, const GramOptions& options) {
    check_feature_count(a, b);
    const auto diag = idx(a.m());
    const auto ta = critical_matrix(a.m(), a.n(), options.alpha, options.convention);
    const auto tb = critical_matrix(b.m(), b.n(), options.alpha, options.convention);
    const Eigen::MatrixXd fa = phi_features(a, ta, options.threads, options.memory_budget_bytes);
    const Eigen::MatrixXd fb = phi_features(b, tb, options.threads, options.memory_budget_bytes);

    GramMatrix gram;
    gram.self_norms_a = feature_norms(fa, diag);
    gram.self_norms_b = feature_norms(fb, diag);
    gram.values.resize(fa.rows(), fb.rows());
    parallel_for_blocks(a.n(), options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Index ei = idx(i);
            for (Index k = 0; k < fb.rows(); ++k) {
                gram.values(ei, k) =
                    cosine(weighted_dot(fa, ei, fb, k, diag), gram.self_norms_a(ei), gram.self_norms_b(k));
            }
        }
    });
    for (Index i = 0; i < fa.rows(); ++i) {
        gram.degenerate_count += gram.self_norms_a(i) < kDegenerateNorm ? 1 : 0;
    }
    for (Index k = 0; k < fb.rows(); ++k) {
        gram.degenerate_count += gram.self_norms_b(k) < kDegenerateNorm ? 1 : 0;
    }
    return gram;
}

} // namespace depcon
