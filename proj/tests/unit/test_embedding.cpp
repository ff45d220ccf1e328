#include "depcon/clustering.hpp"
#include "depcon/embedding.hpp"
#include "depcon/error.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <random>

using namespace depcon;
using namespace depcon::embedding;

namespace {

Eigen::MatrixXd random_points(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        x.data()[i] = normal(rng);
    }
    for (Eigen::Index j = 0; j < d; ++j) {
        x.col(j) *= static_cast<double>(d - j); // distinct variances
    }
    return x;
}

} // namespace

TEST(Kpca, TrainingScoresAreCentered) {
    const Eigen::MatrixXd x = random_points(40, 4, 1);
    const KpcaModel m = kpca_fit(cluster::linear_gram(x), 3);
    const Eigen::MatrixXd scores = kpca_training_scores(m);
    EXPECT_LT(scores.colwise().mean().cwiseAbs().maxCoeff(), 1e-9);
    for (Eigen::Index c = 1; c < m.eigenvalues.size(); ++c) {
        EXPECT_LE(m.eigenvalues(c), m.eigenvalues(c - 1));
    }
}

TEST(Kpca, LinearKernelReproducesPca) {
    const Eigen::MatrixXd x = random_points(50, 3, 2);
    const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / 50.0;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    const KpcaModel m = kpca_fit(cluster::linear_gram(x), 2);
    const Eigen::MatrixXd scores = kpca_training_scores(m);
    for (Eigen::Index c = 0; c < 2; ++c) {
        const Eigen::VectorXd pca = centered * es.eigenvectors().col(2 - c);
        const double sign = pca.dot(scores.col(c)) >= 0 ? 1.0 : -1.0;
        EXPECT_LT((sign * pca - scores.col(c)).cwiseAbs().maxCoeff(), 1e-6);
        // Per-component variance proportional to the eigenvalue.
        EXPECT_NEAR(scores.col(c).squaredNorm(), m.eigenvalues(c), 1e-8 * m.eigenvalues(c));
    }
}

TEST(Kpca, BlockGramSeparatesOnFirstComponent) {
    Eigen::MatrixXd g(6, 6);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            g(i, j) = (i < 3) == (j < 3) ? 1.0 : -1.0;
        }
    }
    const KpcaModel m = kpca_fit(g, 1);
    const Eigen::MatrixXd s = kpca_training_scores(m);
    EXPECT_NEAR(s(0, 0), s(1, 0), 1e-12);
    EXPECT_NEAR(s(3, 0), s(5, 0), 1e-12);
    EXPECT_GT(std::abs(s(0, 0) - s(3, 0)), 1.0);
}

TEST(Kpca, ProjectionOfTrainingAndDuplicates) {
    const Eigen::MatrixXd x = random_points(30, 3, 4);
    const Eigen::MatrixXd g = cluster::linear_gram(x);
    const KpcaModel m = kpca_fit(g, 2);
    EXPECT_LT((kpca_project(m, g) - kpca_training_scores(m)).cwiseAbs().maxCoeff(), 1e-9);

    Eigen::MatrixXd fresh(3, 3);
    fresh.row(0) = x.row(7);
    fresh.row(1) << 0.3, -1.0, 2.0;
    fresh.row(2) = fresh.row(1);
    const Eigen::MatrixXd p = kpca_project(m, fresh * x.transpose());
    EXPECT_LT((p.row(0) - kpca_training_scores(m).row(7)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((p.row(1) - p.row(2)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(kpca_project(m, Eigen::MatrixXd::Zero(2, 29)), Error);
}

TEST(Kpca, EigenvaluesBoundedByTrace) {
    const Eigen::MatrixXd g = cluster::linear_gram(random_points(25, 5, 5));
    const KpcaModel m = kpca_fit(g, 4);
    EXPECT_LE(m.eigenvalues.sum(), m.centered_gram.trace() * (1.0 + 1e-8));
}

TEST(Kpca, RankDeficientKeepsAchievableComponents) {
    Eigen::MatrixXd x(10, 1);
    for (int i = 0; i < 10; ++i) {
        x(i, 0) = i;
    }
    const KpcaModel m = kpca_fit(cluster::linear_gram(x), 3);
    EXPECT_EQ(m.d, 1u);
    ASSERT_EQ(m.warnings.size(), 1u);
    EXPECT_NE(m.warnings[0].find("RankDeficient"), std::string::npos);
}

TEST(Kpca, SignConventionAndValidation) {
    const KpcaModel m = kpca_fit(cluster::linear_gram(random_points(20, 3, 6)), 2);
    for (Eigen::Index c = 0; c < 2; ++c) {
        Eigen::Index pivot = 0;
        m.coefficients.col(c).cwiseAbs().maxCoeff(&pivot);
        EXPECT_GT(m.coefficients(pivot, c), 0.0);
    }
    EXPECT_THROW(kpca_fit(Eigen::MatrixXd::Identity(4, 4), 4), Error);
    EXPECT_THROW(kpca_fit(Eigen::MatrixXd::Zero(3, 4), 1), Error);
}
