#include "depcon/synth.hpp"

#include "depcon/error.hpp"
#include "depcon/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace depcon::synth {

namespace {

// Column standardized with the population standard deviation; a constant
// column maps to zeros.
Eigen::VectorXd standardized(const Eigen::VectorXd& x) {
    const double mean = x.mean();
    const double sd = std::sqrt((x.array() - mean).square().mean());
    if (!(sd > 0.0)) {
        return Eigen::VectorXd::Zero(x.size());
    }
    return (x.array() - mean) / sd;
}

Eigen::VectorXd apply_mechanism(Mechanism mechanism, const Eigen::VectorXd& z) {
    Eigen::VectorXd out = z.array().cos();
    if (mechanism == Mechanism::CenteredCosine) {
        out.array() -= out.mean();
    }
    return out;
}

Eigen::MatrixXd draw_linear(const LinearSem& sem, std::size_t n, std::mt19937_64& rng) {
    const auto m = static_cast<Eigen::Index>(sem.dag.m);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), m);
    std::normal_distribution<double> normal(0.0, 1.0);
    // Noise is drawn vertex by vertex so a vertex's stream does not depend on
    // whether nonlinear terms are added afterwards.
    for (Eigen::Index v = 0; v < m; ++v) {
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
            x(r, v) = sem.noise_scale(v) * normal(rng);
        }
    }
    return x;
}

} // namespace

bool RandomDag::has_edge(std::size_t from, std::size_t to) const {
    if (to >= m || from >= m) {
        throw Error(ErrorKind::InvalidVertex, "vertex out of range");
    }
    const auto& ps = parent_sets[to];
    return std::binary_search(ps.begin(), ps.end(), from);
}

bool RandomDag::adjacent(std::size_t u, std::size_t v) const { return has_edge(u, v) || has_edge(v, u); }

std::size_t RandomDag::edge_count() const {
    std::size_t count = 0;
    for (const auto& ps : parent_sets) {
        count += ps.size();
    }
    return count;
}

RandomDag random_dag(std::size_t m, double edge_probability, std::uint64_t seed) {
    if (m < 2) {
        throw Error(ErrorKind::OutOfRange, "random DAG needs at least 2 vertices");
    }
    if (!(edge_probability > 0.0 && edge_probability <= 1.0)) {
        throw Error(ErrorKind::OutOfRange, "edge probability must lie in (0, 1]");
    }
    RandomDag dag{m, std::vector<std::vector<std::size_t>>(m), edge_probability};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t u = 0; u < m; ++u) {
        for (std::size_t v = u + 1; v < m; ++v) {
            if (unit(rng) < edge_probability) {
                dag.parent_sets[v].push_back(u);
            }
        }
    }
    return dag;
}

bool is_acyclic(const RandomDag& dag) {
    std::vector<std::size_t> indegree(dag.m, 0);
    std::vector<std::vector<std::size_t>> children(dag.m);
    for (std::size_t v = 0; v < dag.m; ++v) {
        for (std::size_t p : dag.parent_sets[v]) {
            if (p >= dag.m || p == v) {
                return false;
            }
            children[p].push_back(v);
            ++indegree[v];
        }
    }
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < dag.m; ++v) {
        if (indegree[v] == 0) {
            ready.push_back(v);
        }
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        const std::size_t v = ready.back();
        ready.pop_back();
        ++visited;
        for (std::size_t c : children[v]) {
            if (--indegree[c] == 0) {
                ready.push_back(c);
            }
        }
    }
    return visited == dag.m;
}

graph::MixedGraph to_mixed_graph(const RandomDag& dag) {
    graph::MixedGraph g(dag.m);
    for (std::size_t v = 0; v < dag.m; ++v) {
        for (std::size_t p : dag.parent_sets[v]) {
            g.set_edge(p, v, graph::EdgeType::TailArrow);
        }
    }
    return g;
}

LinearSem random_linear_sem(const RandomDag& dag, std::uint64_t seed, const SemParameters& params) {
    if (!(params.weight_floor > 0.0 && params.weight_ceiling >= params.weight_floor && params.noise_min > 0.0 &&
          params.noise_max >= params.noise_min)) {
        throw Error(ErrorKind::OutOfRange, "invalid SEM parameter ranges");
    }
    const auto m = static_cast<Eigen::Index>(dag.m);
    LinearSem sem{dag, Eigen::MatrixXd::Zero(m, m), Eigen::VectorXd::Zero(m)};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> magnitude(params.weight_floor, params.weight_ceiling);
    std::uniform_real_distribution<double> noise(params.noise_min, params.noise_max);
    std::bernoulli_distribution negative(0.5);
    for (std::size_t v = 0; v < dag.m; ++v) {
        for (std::size_t p : dag.parent_sets[v]) {
            const double w = magnitude(rng);
            sem.weights(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(v)) = negative(rng) ? -w : w;
        }
    }
    for (Eigen::Index v = 0; v < m; ++v) {
        sem.noise_scale(v) = noise(rng);
    }
    return sem;
}

std::string_view to_string(Mechanism mechanism) noexcept {
    return mechanism == Mechanism::Cosine ? "cosine" : "centered-cosine";
}

Mechanism parse_mechanism(std::string_view text) {
    if (text == "centered-cosine") return Mechanism::CenteredCosine;
    if (text == "cosine") return Mechanism::Cosine;
    throw Error(ErrorKind::OutOfRange, "unknown mechanism '" + std::string(text) + "'");
}

NonlinearSem augment_nonlinear(const LinearSem& base, Mechanism mechanism, double amplitude, std::size_t cap) {
    NonlinearSem sem{base, {}};
    for (std::size_t u = 0; u < base.dag.m; ++u) {
        for (std::size_t v = u + 1; v < base.dag.m; ++v) {
            if (cap != 0 && sem.nonlinear_pairs.size() >= cap) {
                return sem;
            }
            if (!base.dag.adjacent(u, v)) {
                sem.nonlinear_pairs.push_back({u, v, mechanism, amplitude});
            }
        }
    }
    return sem;
}

Dataset sample_linear_sem(const LinearSem& sem, std::size_t n, std::uint64_t seed) {
    return sample_nonlinear_sem(NonlinearSem{sem, {}}, n, seed);
}

Dataset sample_nonlinear_sem(const NonlinearSem& sem, std::size_t n, std::uint64_t seed) {
    const std::size_t m = sem.base.dag.m;
    for (const auto& pair : sem.nonlinear_pairs) {
        if (pair.from >= m || pair.to >= m) {
            throw Error(ErrorKind::InvalidVertex, "nonlinear pair out of range");
        }
        if (pair.from >= pair.to) {
            throw Error(ErrorKind::OutOfRange, "nonlinear pairs must follow the topological order");
        }
        if (sem.base.dag.adjacent(pair.from, pair.to)) {
            throw Error(ErrorKind::PairAdjacentInBase, "pair (" + std::to_string(pair.from) + ", " +
                                                           std::to_string(pair.to) + ") is adjacent in the base DAG");
        }
    }
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd x = draw_linear(sem.base, n, rng);
    for (std::size_t v = 0; v < m; ++v) {
        const auto cv = static_cast<Eigen::Index>(v);
        for (std::size_t p : sem.base.dag.parent_sets[v]) {
            x.col(cv) += sem.base.weights(static_cast<Eigen::Index>(p), cv) * x.col(static_cast<Eigen::Index>(p));
        }
        for (const auto& pair : sem.nonlinear_pairs) {
            if (pair.to == v && pair.amplitude != 0.0) {
                const Eigen::VectorXd z = standardized(x.col(static_cast<Eigen::Index>(pair.from)));
                x.col(cv) += pair.amplitude * apply_mechanism(pair.mechanism, z);
            }
        }
    }
    return Dataset(std::move(x));
}

LabeledDataset build_benchmark(const BenchmarkConfig& config) {
    if (config.num_models == 0 || config.samples_per_model == 0) {
        throw Error(ErrorKind::OutOfRange, "benchmark needs positive model and sample counts");
    }
    if (config.nonlinear && config.num_models % 2 != 0) {
        throw Error(ErrorKind::OddModelCountForNonlinear,
                    "nonlinear benchmark needs an even model count, got " + std::to_string(config.num_models));
    }
    std::vector<NonlinearSem> models;
    models.reserve(config.num_models);
    const std::size_t bases = config.nonlinear ? config.num_models / 2 : config.num_models;
    for (std::size_t b = 0; b < bases; ++b) {
        const RandomDag dag = random_dag(config.m, config.edge_probability, derive_seed(config.seed, 3 * b));
        LinearSem sem = random_linear_sem(dag, derive_seed(config.seed, 3 * b + 1), config.params);
        if (config.nonlinear) {
            models.push_back(NonlinearSem{sem, {}});
            models.push_back(augment_nonlinear(sem, config.mechanism, config.amplitude, config.nonlinear_cap));
        } else {
            models.push_back(NonlinearSem{std::move(sem), {}});
        }
    }

    const std::size_t per = config.samples_per_model;
    Eigen::MatrixXd values(static_cast<Eigen::Index>(per * models.size()), static_cast<Eigen::Index>(config.m));
    std::vector<int> labels;
    labels.reserve(per * models.size());
    for (std::size_t k = 0; k < models.size(); ++k) {
        const std::uint64_t sample_seed = derive_seed(derive_seed(config.seed, 0x5a4d), k);
        const Dataset block = sample_nonlinear_sem(models[k], per, sample_seed);
        values.middleRows(static_cast<Eigen::Index>(k * per), static_cast<Eigen::Index>(per)) = block.values();
        labels.insert(labels.end(), per, static_cast<int>(k));
    }
    return LabeledDataset{Dataset(std::move(values)), std::move(labels), std::move(models)};
}

} // namespace depcon::synth
