#include "depcon/error.hpp"
#include "depcon/kernel.hpp"

#include "oracles.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

using namespace depcon;

TEST(Quantile, ReferenceValues) {
    EXPECT_NEAR(chi2_quantile_1df(0.95), 3.8414588, 1e-6);
    EXPECT_NEAR(chi2_quantile_1df(0.90), 2.7055435, 1e-6);
    EXPECT_NEAR(chi2_quantile_1df(0.50), 0.4549364, 1e-6);
}

TEST(Quantile, AgreesWithBoost) {
    const boost::math::chi_squared dist(1.0);
    for (double p : {1e-8, 1e-4, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99, 0.999, 0.999999}) {
        const double expected = boost::math::quantile(dist, p);
        EXPECT_NEAR(chi2_quantile_1df(p), expected, 1e-10 * std::max(1.0, expected)) << p;
    }
}

TEST(Quantile, RejectsOutOfRange) {
    EXPECT_THROW(chi2_quantile_1df(0.0), Error);
    EXPECT_THROW(chi2_quantile_1df(1.0), Error);
    EXPECT_THROW(chi2_quantile_1df(-0.3), Error);
}

TEST(Critical, Conventions) {
    const auto sr = critical_matrix(4, 50, 0.05, ScaleConvention::SzekelyRizzo);
    EXPECT_NEAR(sr.off_diagonal, 3.8414588, 1e-6);
    const auto cn = critical_matrix(4, 50, 0.05, ScaleConvention::ChiSquareOverN);
    EXPECT_NEAR(cn.off_diagonal, 3.8414588 / 50.0, 1e-8);
    const Eigen::MatrixXd t = sr.matrix();
    EXPECT_EQ(t.diagonal(), Eigen::VectorXd::Zero(4));
    EXPECT_NEAR(t.squaredNorm(), sr.frobenius_squared(), 1e-12);
    EXPECT_EQ(parse_scale_convention(to_string(ScaleConvention::ChiSquareOverN)), ScaleConvention::ChiSquareOverN);
    EXPECT_THROW(parse_scale_convention("other"), Error);
    EXPECT_THROW(critical_matrix(1, 50, 0.05, ScaleConvention::SzekelyRizzo), Error);
    EXPECT_THROW(critical_matrix(3, 50, 1.0, ScaleConvention::SzekelyRizzo), Error);
}

TEST(Phi, MatchesExplicitSummation) {
    const Dataset data = oracle::random_dataset(13, 4, 21);
    const auto t = critical_matrix(4, 13, 0.1, ScaleConvention::SzekelyRizzo);
    const DistanceProfile profile(data);
    const CenteredDistanceTensor tensor = distance_tensor(profile);
    for (std::size_t i = 0; i < data.n(); ++i) {
        const Eigen::MatrixXd expected =
            oracle::phi_oracle(data.values(), static_cast<Eigen::Index>(i), t.off_diagonal, true);
        const Eigen::MatrixXd a = phi_map(profile, t, i).values;
        const Eigen::MatrixXd b = phi_map(tensor, t, i).values;
        EXPECT_LT((a - expected).cwiseAbs().maxCoeff(), 1e-11);
        EXPECT_EQ(a, b);
        EXPECT_EQ(a, a.transpose());
    }
    EXPECT_THROW(phi_map(profile, t, data.n()), Error);
}

TEST(Phi, AggregateEqualsSumOfMaps) {
    const Dataset data = oracle::random_dataset(31, 5, 4);
    const auto t = critical_matrix(5, 31, 0.1, ScaleConvention::SzekelyRizzo);
    const DistanceProfile profile(data);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(5, 5);
    for (std::size_t i = 0; i < data.n(); ++i) {
        sum += phi_map(profile, t, i).values;
    }
    EXPECT_LT((aggregate_phi(profile, t) - sum).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Phi, AggregateIsScaledDistanceCovariance) {
    // Sum_i (Z_iᵀ Z_i)(j, l) = n^2 V^2(j, l) / (mean distance j * mean distance l).
    const Dataset data = oracle::random_dataset(25, 3, 8);
    const auto t = CriticalMatrix::zero(3);
    const Eigen::MatrixXd agg = aggregate_phi(DistanceProfile(data), t);
    const Eigen::MatrixXd v2 = oracle::dcov_oracle(data.values());
    for (Eigen::Index j = 0; j < 3; ++j) {
        for (Eigen::Index l = 0; l < 3; ++l) {
            const double s2 = oracle::mean_distance_oracle(data.values(), j) *
                              oracle::mean_distance_oracle(data.values(), l);
            EXPECT_NEAR(agg(j, l), 25.0 * 25.0 * v2(j, l) / s2, 1e-9 * std::abs(agg(j, l)) + 1e-10);
        }
    }
}

TEST(DistanceCov, MatchesVecOracle) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Dataset data = oracle::random_dataset(8 + seed * 3, 2 + seed % 5, seed);
        const Eigen::MatrixXd got = distance_cov_matrix(data).values;
        const Eigen::MatrixXd expected = oracle::dcov_oracle(data.values());
        EXPECT_LT((got - expected).cwiseAbs().maxCoeff(), 1e-12 * expected.cwiseAbs().maxCoeff());
    }
}

TEST(Gamma, IsFrobeniusInnerProductOfMaps) {
    const Dataset a = oracle::random_dataset(11, 4, 1);
    const Dataset b = oracle::random_dataset(14, 4, 2);
    const auto ta = critical_matrix(4, 11, 0.1, ScaleConvention::SzekelyRizzo);
    const auto tb = critical_matrix(4, 14, 0.1, ScaleConvention::SzekelyRizzo);
    const auto tensor_a = distance_tensor(a);
    const auto tensor_b = distance_tensor(b);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            const Eigen::MatrixXd pa = phi_map(tensor_a, ta, i).values;
            const Eigen::MatrixXd pb = phi_map(tensor_b, tb, k).values;
            const double expected = pa.cwiseProduct(pb).sum();
            const double got = gamma_from_slices(tensor_a.slice(i), tensor_b.slice(k), ta, tb);
            EXPECT_NEAR(got, expected, 1e-9 * std::abs(expected));
        }
    }
}

TEST(Gamma, VectorizedExpansionDiffersExceptRankOne) {
    const Dataset a = oracle::random_dataset(9, 3, 5);
    const auto tensor = distance_tensor(a);
    const auto zero = CriticalMatrix::zero(3);
    const double full = gamma_from_slices(tensor.slice(0), tensor.slice(1), zero, zero);
    const double vec = gamma_vectorized_expansion(tensor.slice(0), tensor.slice(1), zero);
    EXPECT_GT(std::abs(full - vec), 1e-6 * std::abs(full));

    // Rank-one slices u vᵀ and u wᵀ: ||Z_a Z_bᵀ||^2 = (vᵀw)^2 ||u||^4 = (tr Z_aᵀ Z_b)^2.
    Eigen::VectorXd u(4), v(3), w(3);
    u << 1, -2, 0.5, 3;
    v << 0.3, 1, -1;
    w << 2, 0.1, 0.7;
    const Eigen::MatrixXd za = u * v.transpose();
    const Eigen::MatrixXd zb = u * w.transpose();
    EXPECT_NEAR(gamma_from_slices(za, zb, zero, zero), gamma_vectorized_expansion(za, zb, zero), 1e-10);
}

TEST(Kappa, SelfSimilarityAndRange) {
    const Dataset a = oracle::random_dataset(15, 4, 7);
    const auto t = critical_matrix(4, 15, 0.1, ScaleConvention::SzekelyRizzo);
    const auto tensor = distance_tensor(a);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_NEAR(kappa_kernel(tensor, tensor, t, i, i).value, 1.0, 1e-12);
        for (std::size_t k = 0; k < 5; ++k) {
            const auto v = kappa_kernel(tensor, tensor, t, i, k);
            EXPECT_FALSE(v.degenerate);
            EXPECT_LE(std::abs(v.value), 1.0);
        }
    }
}

TEST(Kappa, DegenerateSampleGivesZero) {
    CenteredDistanceTensor zero;
    zero.n = 3;
    zero.m = 2;
    for (int j = 0; j < 2; ++j) {
        zero.d.emplace_back(Eigen::MatrixXd::Zero(3, 3));
        zero.c.emplace_back(Eigen::MatrixXd::Zero(3, 3));
        zero.z.emplace_back(Eigen::MatrixXd::Zero(3, 3));
    }
    zero.feature_mean_distance = Eigen::VectorXd::Ones(2);
    const auto v = kappa_kernel(zero, zero, CriticalMatrix::zero(2), 0, 1);
    EXPECT_TRUE(v.degenerate);
    EXPECT_EQ(v.value, 0.0);
}

TEST(Kappa, KernelDistance) {
    EXPECT_NEAR(kernel_distance(1.0), 0.0, 1e-15);
    EXPECT_NEAR(kernel_distance(-1.0), M_PI, 1e-15);
    EXPECT_NEAR(kernel_distance(1.0 + 1e-12), 0.0, 1e-15);
    EXPECT_THROW(kernel_distance(1.01), Error);
}

TEST(Gram, MatchesPairwiseKappa) {
    const Dataset a = oracle::random_dataset(20, 4, 12);
    GramOptions options;
    const GramMatrix g = gram_matrix(a, options);
    const auto t = critical_matrix(4, 20, options.alpha, options.convention);
    const auto tensor = distance_tensor(a);
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t k = 0; k < 20; ++k) {
            EXPECT_NEAR(g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)),
                        kappa_kernel(tensor, tensor, t, i, k).value, 1e-10);
        }
    }
}

TEST(Gram, ValidKernelMatrix) {
    const Dataset a = oracle::random_dataset(60, 5, 99);
    const GramMatrix g = gram_matrix(a);
    EXPECT_EQ(g.values, g.values.transpose());
    EXPECT_EQ(g.values.diagonal(), Eigen::VectorXd::Ones(60));
    EXPECT_LE(g.values.cwiseAbs().maxCoeff(), 1.0);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.values);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8 * 60);
}

TEST(Gram, IndependentOfThreadsAndMemoryBudget) {
    const Dataset a = oracle::random_dataset(41, 4, 3);
    GramOptions base;
    base.threads = 1;
    const Eigen::MatrixXd ref = gram_matrix(a, base).values;
    for (std::size_t threads : {2u, 3u, 8u}) {
        for (std::size_t budget : {std::size_t{0}, std::size_t{1} << 30}) {
            GramOptions o = base;
            o.threads = threads;
            o.memory_budget_bytes = budget;
            EXPECT_EQ(gram_matrix(a, o).values, ref);
        }
    }
}

TEST(Gram, CrossGramOfSelfMatchesSquare) {
    const Dataset a = oracle::random_dataset(18, 3, 6);
    const Eigen::MatrixXd sq = gram_matrix(a).values;
    const Eigen::MatrixXd cross = gram_matrix(a, a).values;
    EXPECT_LT((sq - cross).cwiseAbs().maxCoeff(), 1e-12);
    const Dataset b = oracle::random_dataset(18, 4, 6);
    EXPECT_THROW(gram_matrix(a, b), Error);
}

TEST(Gram, PositiveAffineInvariance) {
    const Dataset a = oracle::random_dataset(30, 4, 17);
    Eigen::MatrixXd x = a.values();
    const double scales[] = {3.0, 0.01, 250.0, 1.7};
    const double shifts[] = {-4.0, 100.0, 0.5, -1e3};
    for (Eigen::Index j = 0; j < 4; ++j) {
        x.col(j) = scales[j] * x.col(j).array() + shifts[j];
    }
    const Eigen::MatrixXd g1 = gram_matrix(a).values;
    const Eigen::MatrixXd g2 = gram_matrix(Dataset(x)).values;
    EXPECT_LT((g1 - g2).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Features, WeightedProductIsFrobenius) {
    const Dataset a = oracle::random_dataset(12, 4, 2);
    const auto t = critical_matrix(4, 12, 0.1, ScaleConvention::SzekelyRizzo);
    const Eigen::MatrixXd f = phi_features(a, t);
    const Eigen::VectorXd w = phi_feature_weights(4);
    const DistanceProfile profile(a);
    const Eigen::MatrixXd p0 = phi_map(profile, t, 0).values;
    const Eigen::MatrixXd p5 = phi_map(profile, t, 5).values;
    const double via_features = (f.row(0).transpose().cwiseProduct(w)).dot(f.row(5).transpose());
    EXPECT_NEAR(via_features, p0.cwiseProduct(p5).sum(), 1e-9 * std::abs(via_features));
}
