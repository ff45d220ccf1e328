#include "depcon/embedding.hpp"

#include "depcon/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include <string>

namespace depcon::embedding {

KpcaModel kpca_fit(const Eigen::MatrixXd& gram, std::size_t d) {
    if (gram.rows() != gram.cols()) {
        throw Error(ErrorKind::NotSquare, "Gram matrix is " + std::to_string(gram.rows()) + " x " +
                                              std::to_string(gram.cols()));
    }
    const Eigen::Index n = gram.rows();
    if (d < 1 || static_cast<Eigen::Index>(d) >= n) {
        throw Error(ErrorKind::OutOfRange, "component count must satisfy 1 <= d < n");
    }
    KpcaModel model;
    model.train_column_means = gram.colwise().mean().transpose();
    model.train_grand_mean = model.train_column_means.mean();
    const Eigen::VectorXd& mu = model.train_column_means;
    model.centered_gram = (gram.rowwise() - mu.transpose()).colwise() - mu;
    model.centered_gram.array() += model.train_grand_mean;
    // Exact symmetry keeps the eigensolver's output independent of which triangle it reads.
    model.centered_gram = 0.5 * (model.centered_gram + model.centered_gram.transpose()).eval();

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(model.centered_gram);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::RankDeficient, "eigendecomposition failed");
    }
    // Eigen returns ascending order.
    const Eigen::VectorXd& values = solver.eigenvalues();
    const double largest = values(n - 1);
    const double tolerance = 1e-10 * std::max(largest, 0.0);
    std::size_t kept = 0;
    while (kept < d && values(n - 1 - static_cast<Eigen::Index>(kept)) > tolerance) {
        ++kept;
    }
    if (kept < d) {
        model.warnings.push_back("RankDeficient: only " + std::to_string(kept) + " of " + std::to_string(d) +
                                 " components have eigenvalues above tolerance");
    }
    if (kept == 0) {
        throw Error(ErrorKind::RankDeficient, "centered Gram has no positive eigenvalue");
    }
    model.d = kept;
    const auto k = static_cast<Eigen::Index>(kept);
    model.eigenvalues.resize(k);
    model.coefficients.resize(n, k);
    for (Eigen::Index c = 0; c < k; ++c) {
        const double lambda = values(n - 1 - c);
        Eigen::VectorXd v = solver.eigenvectors().col(n - 1 - c);
        Eigen::Index pivot = 0;
        for (Eigen::Index i = 1; i < n; ++i) {
            if (std::abs(v(i)) > std::abs(v(pivot))) {
                pivot = i;
            }
        }
        if (v(pivot) < 0.0) {
            v = -v;
        }
        model.eigenvalues(c) = lambda;
        model.coefficients.col(c) = v / std::sqrt(lambda);
    }
    return model;
}

Eigen::MatrixXd kpca_training_scores(const KpcaModel& model) { return model.centered_gram * model.coefficients; }

Eigen::MatrixXd kpca_project(const KpcaModel& model, const Eigen::MatrixXd& cross_gram) {
    const Eigen::Index n = model.train_column_means.size();
    if (cross_gram.cols() != n) {
        throw Error(ErrorKind::DimensionMismatch, "cross Gram has " + std::to_string(cross_gram.cols()) +
                                                      " columns for " + std::to_string(n) + " training samples");
    }
    const Eigen::VectorXd row_means = cross_gram.rowwise().mean();
    Eigen::MatrixXd centered = (cross_gram.rowwise() - model.train_column_means.transpose()).colwise() - row_means;
    centered.array() += model.train_grand_mean;
    return centered * model.coefficients;
}

} // namespace depcon::embedding
