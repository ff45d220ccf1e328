#pragma once

#include "depcon/dataset.hpp"
#include "depcon/kernel.hpp"

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

namespace depcon {

struct PairDecision {
    std::size_t i = 0; ///< first feature
    std::size_t j = 0; ///< second feature, j > i
    bool reject = false;
    double statistic = 0.0;
};

struct IndependenceResult {
    /// Sum of phi over all samples; entry (j, l) > 0 rejects independence of j and l.
    Eigen::MatrixXd statistic;
    /// Every unordered feature pair, row-major over j < l.
    std::vector<PairDecision> pairs;
    CriticalMatrix critical;
    std::vector<std::string> warnings;

    /// Diagonal entries are not tests; asking for them throws OutOfRange.
    bool rejects(std::size_t j, std::size_t l) const;
};

/// Pairwise unconditional independence tests from the aggregate dependence
/// contribution matrix. Warns (but proceeds) when n < 10.
IndependenceResult independence_test(const Dataset& data, double alpha = 0.1,
                                     ScaleConvention convention = ScaleConvention::SzekelyRizzo);

/// A feature pair where exactly one dataset rejects independence.
struct StructureWitness {
    std::size_t i = 0;
    std::size_t j = 0;
    double statistic_a = 0.0;
    double statistic_b = 0.0;
};

struct StructureDifference {
    /// Sum of all cross-Gram kappa values between the two datasets.
    double score = 0.0;
    /// True when the score is negative.
    bool different_structure = false;
    std::vector<StructureWitness> witnesses;
};

StructureDifference structure_difference_score(const Dataset& a, const Dataset& b, const GramOptions& options = {});

/// How the sample-set distance is scaled.
enum class SetDistanceConvention {
    /// (m^2 - mean gamma) / 2; equals the graph distance on sign-matrix means.
    Halved,
    /// m^2 - sum gamma / (2 n n'); kept for comparison.
    Unhalved,
};

/// Distance between two sample sets from the mean cross gamma value. Requires
/// equal sample and feature counts.
double sample_set_distance(const Dataset& a, const Dataset& b, const GramOptions& options = {},
                           SetDistanceConvention convention = SetDistanceConvention::Halved);

/// Same distance evaluated directly on mapped matrices phi[a_i] and phi[b_k],
/// e.g. idealized inputs whose means are sign matrices.
double sample_set_distance(std::span<const Eigen::MatrixXd> phis_a, std::span<const Eigen::MatrixXd> phis_b,
                           SetDistanceConvention convention = SetDistanceConvention::Halved);

} // namespace depcon
