#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <vector>

namespace depcon::embedding {

struct KpcaModel {
    Eigen::MatrixXd centered_gram;
    /// Retained eigenvalues, nonincreasing.
    Eigen::VectorXd eigenvalues;
    /// n x d; column c is eigenvector c scaled by 1 / sqrt(eigenvalue c).
    Eigen::MatrixXd coefficients;
    std::size_t d = 0;
    /// Column means and grand mean of the uncentered training Gram.
    Eigen::VectorXd train_column_means;
    double train_grand_mean = 0.0;
    std::vector<std::string> warnings;
};

/// Double-centers the Gram and keeps the top d eigenpairs. Eigenvalues at or
/// below 1e-10 of the largest are dropped; when fewer than d survive the model
/// keeps those and records a RankDeficient warning. Each coefficient column is
/// signed so its largest-magnitude entry is positive.
KpcaModel kpca_fit(const Eigen::MatrixXd& gram, std::size_t d);

/// Scores of the training samples, n x d.
Eigen::MatrixXd kpca_training_scores(const KpcaModel& model);

/// Projects new samples given their n_new x n kernel values against the
/// training samples. Throws DimensionMismatch.
Eigen::MatrixXd kpca_project(const KpcaModel& model, const Eigen::MatrixXd& cross_gram);

} // namespace depcon::embedding
