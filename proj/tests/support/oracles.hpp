#pragma once

// Reference computations written straight from the textbook definitions,
// kept separate from the library code paths they check.

#include "depcon/dataset.hpp"
#include "depcon/graph.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace depcon::oracle {

inline Dataset random_dataset(std::size_t n, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            x(i, j) = normal(rng);
        }
    }
    // Mix the columns a little so features are dependent.
    for (Eigen::Index j = 1; j < x.cols(); ++j) {
        x.col(j) += 0.5 * x.col(j - 1).array().square().matrix();
    }
    return Dataset(std::move(x));
}

/// Doubly centered distance matrix of column j, built with explicit loops.
inline Eigen::MatrixXd centered_distance_oracle(const Eigen::MatrixXd& x, Eigen::Index j) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            d(a, b) = std::abs(x(a, j) - x(b, j));
        }
    }
    Eigen::VectorXd row(n);
    Eigen::VectorXd col(n);
    double grand = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
        row(a) = 0.0;
        col(a) = 0.0;
        for (Eigen::Index b = 0; b < n; ++b) {
            row(a) += d(a, b);
            col(a) += d(b, a);
        }
        grand += row(a);
        row(a) /= static_cast<double>(n);
        col(a) /= static_cast<double>(n);
    }
    grand /= static_cast<double>(n * n);
    Eigen::MatrixXd c(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            c(a, b) = d(a, b) - row(a) - col(b) + grand;
        }
    }
    return c;
}

inline double mean_distance_oracle(const Eigen::MatrixXd& x, Eigen::Index j) {
    double total = 0.0;
    for (Eigen::Index a = 0; a < x.rows(); ++a) {
        for (Eigen::Index b = 0; b < x.rows(); ++b) {
            total += std::abs(x(a, j) - x(b, j));
        }
    }
    return total / static_cast<double>(x.rows() * x.rows());
}

/// Squared distance covariances as (1/n^2) Lᵀ L with L = (vec C^1, ..., vec C^m).
inline Eigen::MatrixXd dcov_oracle(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    const Eigen::Index m = x.cols();
    Eigen::MatrixXd l(n * n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::MatrixXd c = centered_distance_oracle(x, j);
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = 0; b < n; ++b) {
                l(a * n + b, j) = c(a, b);
            }
        }
    }
    return (l.transpose() * l) / static_cast<double>(n * n);
}

/// phi for sample i by explicit summation: sum_k Z(i,k,j) Z(i,k,l) - T(j,l).
inline Eigen::MatrixXd phi_oracle(const Eigen::MatrixXd& x, Eigen::Index i, double t_off, bool standardize) {
    const Eigen::Index m = x.cols();
    std::vector<Eigen::MatrixXd> z;
    for (Eigen::Index j = 0; j < m; ++j) {
        Eigen::MatrixXd c = centered_distance_oracle(x, j);
        if (standardize) {
            c /= mean_distance_oracle(x, j);
        }
        z.push_back(std::move(c));
    }
    Eigen::MatrixXd phi(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index l = 0; l < m; ++l) {
            double s = 0.0;
            for (Eigen::Index k = 0; k < x.rows(); ++k) {
                s += z[static_cast<std::size_t>(j)](i, k) * z[static_cast<std::size_t>(l)](i, k);
            }
            phi(j, l) = s - (j == l ? 0.0 : t_off);
        }
    }
    return phi;
}

/// Unconditional m-connection by enumerating simple paths and rejecting any
/// with a collider at an intermediate vertex.
inline bool m_connected_by_paths(const graph::MixedGraph& g, std::size_t j, std::size_t k) {
    const std::size_t m = g.vertex_count();
    std::vector<std::size_t> path{j};
    std::vector<bool> on_path(m, false);
    on_path[j] = true;
    bool found = false;
    auto extend = [&](auto&& self) -> void {
        if (found) {
            return;
        }
        const std::size_t v = path.back();
        for (std::size_t w = 0; w < m && !found; ++w) {
            if (w == v || on_path[w] || g.edge(v, w) == graph::EdgeType::None) {
                continue;
            }
            if (path.size() >= 2) {
                const std::size_t u = path[path.size() - 2];
                if (g.arrowhead_at(u, v) && g.arrowhead_at(w, v)) {
                    continue; // v would be a collider
                }
            }
            if (w == k) {
                found = true;
                return;
            }
            path.push_back(w);
            on_path[w] = true;
            self(self);
            on_path[w] = false;
            path.pop_back();
        }
    };
    extend(extend);
    return found;
}

/// Lloyd's k-means on explicit coordinates from the given seed rows; ties go
/// to the lowest center index. Returns labels.
inline std::vector<int> lloyd_oracle(const Eigen::MatrixXd& x, const std::vector<std::size_t>& seeds,
                                     std::size_t max_iter) {
    const Eigen::Index n = x.rows();
    const auto k = static_cast<Eigen::Index>(seeds.size());
    Eigen::MatrixXd centers(k, x.cols());
    for (Eigen::Index c = 0; c < k; ++c) {
        centers.row(c) = x.row(static_cast<Eigen::Index>(seeds[static_cast<std::size_t>(c)]));
    }
    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    for (std::size_t iter = 0; iter <= max_iter; ++iter) {
        std::vector<int> next(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            double best = INFINITY;
            int best_c = 0;
            for (Eigen::Index c = 0; c < k; ++c) {
                const double d = (x.row(i) - centers.row(c)).squaredNorm();
                if (d < best) {
                    best = d;
                    best_c = static_cast<int>(c);
                }
            }
            next[static_cast<std::size_t>(i)] = best_c;
        }
        if (next == labels) {
            break;
        }
        labels = next;
        centers.setZero();
        Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            centers.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
            counts(labels[static_cast<std::size_t>(i)]) += 1.0;
        }
        for (Eigen::Index c = 0; c < k; ++c) {
            centers.row(c) /= counts(c);
        }
    }
    return labels;
}

/// Calinski-Harabasz index on explicit coordinates.
inline double calinski_harabasz_oracle(const Eigen::MatrixXd& x, const std::vector<int>& labels) {
    const Eigen::Index n = x.rows();
    int k = 0;
    for (int l : labels) {
        k = std::max(k, l + 1);
    }
    const Eigen::RowVectorXd mean = x.colwise().mean();
    Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(k, x.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
        centers.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
        counts(labels[static_cast<std::size_t>(i)]) += 1.0;
    }
    double between = 0.0;
    for (int c = 0; c < k; ++c) {
        centers.row(c) /= counts(c);
        between += counts(c) * (centers.row(c) - mean).squaredNorm();
    }
    double within = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        within += (x.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
    }
    return (between / (k - 1)) / (within / static_cast<double>(n - k));
}

/// Random ancestral graph: a random DAG over a shuffled order plus <-> edges
/// between non-adjacent pairs that are not ancestrally related.
inline graph::MixedGraph random_ancestral_graph(std::size_t m, std::mt19937_64& rng, double p_directed = 0.35,
                                                double p_bidirected = 0.25) {
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) {
        order[i] = i;
    }
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    graph::MixedGraph g(m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            if (unit(rng) < p_directed) {
                g.set_edge(order[a], order[b], graph::EdgeType::TailArrow);
            }
        }
    }
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            if (g.edge(a, b) != graph::EdgeType::None || unit(rng) >= p_bidirected) {
                continue;
            }
            g.set_edge(a, b, graph::EdgeType::ArrowArrow);
            if (!graph::is_ancestral(g)) {
                g.set_edge(a, b, graph::EdgeType::None);
            }
        }
    }
    return g;
}

/// Every bidirected representative over m vertices, indexed by the bit mask
/// of its connected unordered pairs.
inline std::vector<graph::BidirectedRepresentative> all_representatives(std::size_t m) {
    const std::size_t pairs = m * (m - 1) / 2;
    std::vector<graph::BidirectedRepresentative> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << pairs); ++mask) {
        graph::BidirectedRepresentative u(m);
        std::size_t bit = 0;
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t k = j + 1; k < m; ++k, ++bit) {
                u.set_connected(j, k, ((mask >> bit) & 1U) != 0);
            }
        }
        out.push_back(std::move(u));
    }
    return out;
}

inline graph::BidirectedRepresentative random_representative(std::size_t m, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.5);
    graph::BidirectedRepresentative u(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
            u.set_connected(j, k, coin(rng));
        }
    }
    return u;
}

} // namespace depcon::oracle
