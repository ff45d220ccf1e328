#include "depcon/hypothesis.hpp"

#include "depcon/error.hpp"
#include "depcon/numeric.hpp"

namespace depcon {

namespace {

constexpr std::size_t kRecommendedMinSamples = 10;

} // namespace

bool IndependenceResult::rejects(std::size_t j, std::size_t l) const {
    if (j == l) {
        throw Error(ErrorKind::OutOfRange, "no independence test on the diagonal");
    }
    if (j >= static_cast<std::size_t>(statistic.rows()) || l >= static_cast<std::size_t>(statistic.rows())) {
        throw Error(ErrorKind::IndexOutOfBounds, "feature pair out of range");
    }
    return statistic(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) > 0.0;
}

IndependenceResult independence_test(const Dataset& data, double alpha, ScaleConvention convention) {
    IndependenceResult result;
    result.critical = critical_matrix(data.m(), data.n(), alpha, convention);
    if (data.n() < kRecommendedMinSamples) {
        result.warnings.push_back("only " + std::to_string(data.n()) +
                                  " samples; the chi-square calibration is asymptotic");
    }
    const DistanceProfile profile(data);
    result.statistic = aggregate_phi(profile, result.critical);
    for (std::size_t j = 0; j < data.m(); ++j) {
        for (std::size_t l = j + 1; l < data.m(); ++l) {
            const double s = result.statistic(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
            result.pairs.push_back({j, l, s > 0.0, s});
        }
    }
    return result;
}

StructureDifference structure_difference_score(const Dataset& a, const Dataset& b, const GramOptions& options) {
    const GramMatrix cross = gram_matrix(a, b, options);
    StructureDifference out;
    CompensatedSum total;
    for (Eigen::Index i = 0; i < cross.values.rows(); ++i) {
        for (Eigen::Index k = 0; k < cross.values.cols(); ++k) {
            total.add(cross.values(i, k));
        }
    }
    out.score = total.value();
    out.different_structure = out.score < 0.0;

    const auto test_a = independence_test(a, options.alpha, options.convention);
    const auto test_b = independence_test(b, options.alpha, options.convention);
    for (std::size_t p = 0; p < test_a.pairs.size(); ++p) {
        const auto& pa = test_a.pairs[p];
        const auto& pb = test_b.pairs[p];
        if (pa.reject != pb.reject) {
            out.witnesses.push_back({pa.i, pa.j, pa.statistic, pb.statistic});
        }
    }
    return out;
}

double sample_set_distance(std::span<const Eigen::MatrixXd> phis_a, std::span<const Eigen::MatrixXd> phis_b,
                           SetDistanceConvention convention) {
    if (phis_a.empty() || phis_b.empty()) {
        throw Error(ErrorKind::TooFewSamples, "sample set distance needs nonempty sets");
    }
    const Eigen::Index m = phis_a.front().rows();
    for (const auto* set : {&phis_a, &phis_b}) {
        for (const auto& phi : *set) {
            if (phi.rows() != m || phi.cols() != m) {
                throw Error(ErrorKind::DimensionMismatch, "all mapped matrices must be m x m with a shared m");
            }
        }
    }
    CompensatedSum total;
    for (const auto& pa : phis_a) {
        for (const auto& pb : phis_b) {
            total.add(pa.cwiseProduct(pb).sum());
        }
    }
    const double pairs = static_cast<double>(phis_a.size()) * static_cast<double>(phis_b.size());
    const double m2 = static_cast<double>(m * m);
    if (convention == SetDistanceConvention::Unhalved) {
        return m2 - total.value() / (2.0 * pairs);
    }
    return 0.5 * (m2 - total.value() / pairs);
}

double sample_set_distance(const Dataset& a, const Dataset& b, const GramOptions& options,
                           SetDistanceConvention convention) {
    if (a.m() != b.m() || a.n() != b.n()) {
        throw Error(ErrorKind::DimensionMismatch, "sample set distance needs equal n and m");
    }
    const auto ta = critical_matrix(a.m(), a.n(), options.alpha, options.convention);
    const auto tb = critical_matrix(b.m(), b.n(), options.alpha, options.convention);
    const DistanceProfile pa(a);
    const DistanceProfile pb(b);
    std::vector<Eigen::MatrixXd> phis_a;
    std::vector<Eigen::MatrixXd> phis_b;
    phis_a.reserve(a.n());
    phis_b.reserve(b.n());
    for (std::size_t i = 0; i < a.n(); ++i) {
        phis_a.push_back(phi_map(pa, ta, i).values);
        phis_b.push_back(phi_map(pb, tb, i).values);
    }
    return sample_set_distance(std::span<const Eigen::MatrixXd>(phis_a), std::span<const Eigen::MatrixXd>(phis_b),
                               convention);
}

} // namespace depcon
