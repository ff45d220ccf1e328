#pragma once

#include "depcon/dataset.hpp"
#include "depcon/graph.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace depcon::synth {

/// DAG over vertices 0..m-1 whose topological order is the index order.
struct RandomDag {
    std::size_t m = 0;
    std::vector<std::vector<std::size_t>> parent_sets; ///< sorted, all < child
    double edge_probability = 0.0;

    bool has_edge(std::size_t from, std::size_t to) const;
    /// Adjacent in either direction.
    bool adjacent(std::size_t u, std::size_t v) const;
    std::size_t edge_count() const;
};

/// Includes each forward pair (u < v) independently with probability p.
/// Requires m >= 2 and 0 < p < 1; p == 1 is accepted as the complete DAG.
RandomDag random_dag(std::size_t m, double edge_probability, std::uint64_t seed);

/// Passes when a topological sort over parent_sets succeeds.
bool is_acyclic(const RandomDag& dag);

/// The DAG as a mixed graph with a directed edge per parent.
graph::MixedGraph to_mixed_graph(const RandomDag& dag);

struct LinearSem {
    RandomDag dag;
    Eigen::MatrixXd weights;     ///< weights(u, v) on edge u -> v, zero elsewhere
    Eigen::VectorXd noise_scale; ///< per vertex, positive
};

struct SemParameters {
    double weight_floor = 0.5;
    double weight_ceiling = 1.5;
    double noise_min = 0.5;
    double noise_max = 1.0;
};

/// Edge weights uniform on [-ceiling, -floor] U [floor, ceiling]; noise scales
/// uniform on [noise_min, noise_max].
LinearSem random_linear_sem(const RandomDag& dag, std::uint64_t seed, const SemParameters& params = {});

enum class Mechanism {
    /// cos(z) - mean(cos z) over the sample: even, uncorrelated with z, no location shift.
    CenteredCosine,
    /// cos(z): also uncorrelated with z but shifts the child's mean.
    Cosine,
};

std::string_view to_string(Mechanism mechanism) noexcept;
Mechanism parse_mechanism(std::string_view text);

struct NonlinearPair {
    std::size_t from = 0;
    std::size_t to = 0;
    Mechanism mechanism = Mechanism::CenteredCosine;
    double amplitude = 1.0;
};

struct NonlinearSem {
    LinearSem base;
    std::vector<NonlinearPair> nonlinear_pairs;
};

/// Every ordered forward pair non-adjacent in the base DAG, up to `cap`
/// pairs in row-major order (0 means no cap).
NonlinearSem augment_nonlinear(const LinearSem& base, Mechanism mechanism = Mechanism::CenteredCosine,
                               double amplitude = 1.0, std::size_t cap = 0);

/// X_v = sum_p w_pv X_p + s_v eps, eps standard normal, in topological order.
Dataset sample_linear_sem(const LinearSem& sem, std::size_t n, std::uint64_t seed);

/// As the linear sample, then for each pair (u, v) adds amplitude * mech(standardized X_u)
/// to X_v, processing children in topological order so effects propagate.
/// Throws PairAdjacentInBase for a pair adjacent in the base DAG.
Dataset sample_nonlinear_sem(const NonlinearSem& sem, std::size_t n, std::uint64_t seed);

struct BenchmarkConfig {
    std::size_t num_models = 6;
    std::size_t samples_per_model = 100;
    std::size_t m = 10;
    double edge_probability = 0.3;
    bool nonlinear = false;
    std::uint64_t seed = 0;
    SemParameters params{};
    Mechanism mechanism = Mechanism::CenteredCosine;
    double amplitude = 1.0;
    std::size_t nonlinear_cap = 0;
};

struct LabeledDataset {
    Dataset data;
    std::vector<int> labels;
    /// Generating model per label; linear models carry no nonlinear pairs.
    std::vector<NonlinearSem> models;
};

/// Linear case: num_models independent DAGs and SEMs. Nonlinear case:
/// num_models / 2 base SEMs, each followed by its nonlinear augmentation.
/// Throws OddModelCountForNonlinear for an odd model count in the nonlinear case.
LabeledDataset build_benchmark(const BenchmarkConfig& config);

} // namespace depcon::synth
