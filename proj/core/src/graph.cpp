#include "depcon/graph.hpp"

#include "depcon/error.hpp"

#include <deque>
#include <string>

namespace depcon::graph {

namespace {

void check_vertex(std::size_t v, std::size_t m) {
    if (v >= m) {
        throw Error(ErrorKind::InvalidVertex, "vertex " + std::to_string(v) + " of " + std::to_string(m));
    }
}

void check_pair(std::size_t j, std::size_t k, std::size_t m) {
    check_vertex(j, m);
    check_vertex(k, m);
    if (j == k) {
        throw Error(ErrorKind::InvalidVertex, "self pair (" + std::to_string(j) + ", " + std::to_string(j) + ")");
    }
}

void check_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw Error(ErrorKind::DimensionMismatch,
                    "vertex counts differ: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

// j is a proper ancestor of k through directed edges.
std::vector<std::vector<bool>> ancestor_closure(const MixedGraph& g) {
    const std::size_t m = g.vertex_count();
    std::vector<std::vector<bool>> anc(m, std::vector<bool>(m, false));
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<std::size_t> stack{j};
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w = 0; w < m; ++w) {
                if (w != v && g.edge(v, w) == EdgeType::TailArrow && !anc[j][w]) {
                    anc[j][w] = true;
                    stack.push_back(w);
                }
            }
        }
    }
    return anc;
}

} // namespace

std::string_view to_string(EdgeType e) noexcept {
    switch (e) {
        case EdgeType::None: return "none";
        case EdgeType::TailTail: return "--";
        case EdgeType::ArrowArrow: return "<->";
        case EdgeType::TailArrow: return "->";
        case EdgeType::ArrowTail: return "<-";
    }
    return "none";
}

EdgeType parse_edge_type(std::string_view text) {
    if (text == "--") return EdgeType::TailTail;
    if (text == "<->") return EdgeType::ArrowArrow;
    if (text == "->") return EdgeType::TailArrow;
    if (text == "<-") return EdgeType::ArrowTail;
    if (text == "none") return EdgeType::None;
    throw Error(ErrorKind::InvalidFormat, "unknown edge type '" + std::string(text) + "'");
}

MixedGraph::MixedGraph(std::size_t m) : m_(m), edges_(m * (m > 0 ? m - 1 : 0) / 2, EdgeType::None) {}

std::size_t MixedGraph::slot(std::size_t j, std::size_t k) const {
    // j < k; offset of row j in the packed strict upper triangle.
    return j * (2 * m_ - j - 1) / 2 + (k - j - 1);
}

EdgeType MixedGraph::edge(std::size_t j, std::size_t k) const {
    check_pair(j, k, m_);
    return j < k ? edges_[slot(j, k)] : mirror(edges_[slot(k, j)]);
}

void MixedGraph::set_edge(std::size_t j, std::size_t k, EdgeType e) {
    check_pair(j, k, m_);
    if (j < k) {
        edges_[slot(j, k)] = e;
    } else {
        edges_[slot(k, j)] = mirror(e);
    }
}

bool MixedGraph::arrowhead_at(std::size_t j, std::size_t k) const {
    const EdgeType e = edge(j, k);
    return e == EdgeType::TailArrow || e == EdgeType::ArrowArrow;
}

bool is_ancestral(const MixedGraph& g) {
    const std::size_t m = g.vertex_count();
    const auto anc = ancestor_closure(g);
    for (std::size_t j = 0; j < m; ++j) {
        if (anc[j][j]) {
            return false;
        }
        for (std::size_t k = 0; k < m; ++k) {
            if (j == k) {
                continue;
            }
            const EdgeType e = g.edge(j, k);
            if (e == EdgeType::ArrowArrow && (anc[j][k] || anc[k][j])) {
                return false;
            }
            if (e == EdgeType::TailTail) {
                // Endpoints of an undirected edge take no arrowheads.
                for (std::size_t w = 0; w < m; ++w) {
                    if (w != j && g.edge(w, j) != EdgeType::None && g.arrowhead_at(w, j)) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

bool m_connected_empty(const MixedGraph& g, std::size_t j, std::size_t k) {
    const std::size_t m = g.vertex_count();
    check_pair(j, k, m);
    // State: (vertex, whether the edge used to enter it has an arrowhead there).
    // Leaving through an edge with an arrowhead at the same vertex would make it a collider.
    std::vector<bool> seen(2 * m, false);
    std::deque<std::pair<std::size_t, bool>> queue;
    auto push = [&](std::size_t v, bool arrow_in) {
        const std::size_t s = 2 * v + (arrow_in ? 1 : 0);
        if (!seen[s]) {
            seen[s] = true;
            queue.emplace_back(v, arrow_in);
        }
    };
    for (std::size_t w = 0; w < m; ++w) {
        if (w != j && g.edge(j, w) != EdgeType::None) {
            if (w == k) {
                return true;
            }
            push(w, g.arrowhead_at(j, w));
        }
    }
    while (!queue.empty()) {
        const auto [v, arrow_in] = queue.front();
        queue.pop_front();
        for (std::size_t w = 0; w < m; ++w) {
            if (w == v || g.edge(v, w) == EdgeType::None) {
                continue;
            }
            if (arrow_in && g.arrowhead_at(w, v)) {
                continue;
            }
            if (w == k) {
                return true;
            }
            push(w, g.arrowhead_at(v, w));
        }
    }
    return false;
}

BidirectedRepresentative::BidirectedRepresentative(std::size_t m) : m_(m), connected_(m * m, false) {}

BidirectedRepresentative BidirectedRepresentative::from_matrix(
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& connected) {
    if (connected.rows() != connected.cols()) {
        throw Error(ErrorKind::NotSquare, "connection matrix must be square");
    }
    const auto m = static_cast<std::size_t>(connected.rows());
    BidirectedRepresentative u(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            const bool value = connected(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
            if (value != connected(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) ||
                (j == k && value)) {
                throw Error(ErrorKind::InvalidGraph, "connection matrix must be symmetric with a false diagonal");
            }
            u.connected_[j * m + k] = value;
        }
    }
    return u;
}

BidirectedRepresentative BidirectedRepresentative::complete(std::size_t m) {
    BidirectedRepresentative u(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            u.connected_[j * m + k] = j != k;
        }
    }
    return u;
}

bool BidirectedRepresentative::connected(std::size_t j, std::size_t k) const {
    check_vertex(j, m_);
    check_vertex(k, m_);
    return connected_[j * m_ + k];
}

void BidirectedRepresentative::set_connected(std::size_t j, std::size_t k, bool value) {
    check_pair(j, k, m_);
    connected_[j * m_ + k] = value;
    connected_[k * m_ + j] = value;
}

MixedGraph BidirectedRepresentative::to_graph() const {
    MixedGraph g(m_);
    for (std::size_t j = 0; j < m_; ++j) {
        for (std::size_t k = j + 1; k < m_; ++k) {
            if (connected_[j * m_ + k]) {
                g.set_edge(j, k, EdgeType::ArrowArrow);
            }
        }
    }
    return g;
}

BidirectedRepresentative representative(const MixedGraph& g) {
    if (!is_ancestral(g)) {
        throw Error(ErrorKind::InvalidGraph, "graph is not ancestral");
    }
    const std::size_t m = g.vertex_count();
    BidirectedRepresentative u(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
            u.set_connected(j, k, m_connected_empty(g, j, k));
        }
    }
    return u;
}

MixedGraph hamming_product(const MixedGraph& g, const MixedGraph& h) {
    check_same_size(g.vertex_count(), h.vertex_count());
    const std::size_t m = g.vertex_count();
    MixedGraph out(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
            if (g.edge(j, k) == h.edge(j, k)) {
                out.set_edge(j, k, EdgeType::ArrowArrow);
            }
        }
    }
    return out;
}

BidirectedRepresentative hamming_product(const BidirectedRepresentative& u, const BidirectedRepresentative& v) {
    check_same_size(u.vertex_count(), v.vertex_count());
    const std::size_t m = u.vertex_count();
    BidirectedRepresentative out(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
            out.set_connected(j, k, u.connected(j, k) == v.connected(j, k));
        }
    }
    return out;
}

std::size_t graph_distance(const BidirectedRepresentative& u, const BidirectedRepresentative& v) {
    check_same_size(u.vertex_count(), v.vertex_count());
    const std::size_t m = u.vertex_count();
    std::size_t disagreements = 0;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            if (j != k && u.connected(j, k) != v.connected(j, k)) {
                ++disagreements;
            }
        }
    }
    return disagreements;
}

SignMatrix sign_map(const BidirectedRepresentative& u) {
    const auto m = static_cast<Eigen::Index>(u.vertex_count());
    SignMatrix s{Eigen::MatrixXi::Constant(m, m, -1)};
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index k = 0; k < m; ++k) {
            if (j == k || u.connected(static_cast<std::size_t>(j), static_cast<std::size_t>(k))) {
                s.values(j, k) = 1;
            }
        }
    }
    return s;
}

SignMatrix sign_of_statistic(const Eigen::MatrixXd& statistic) {
    if (statistic.rows() != statistic.cols()) {
        throw Error(ErrorKind::NotSquare, std::to_string(statistic.rows()) + " x " + std::to_string(statistic.cols()));
    }
    const Eigen::Index m = statistic.rows();
    SignMatrix s{Eigen::MatrixXi::Constant(m, m, -1)};
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index k = 0; k < m; ++k) {
            if (j == k || statistic(j, k) > 0.0) {
                s.values(j, k) = 1;
            }
        }
    }
    return s;
}

SignMatrix operator*(const SignMatrix& a, const SignMatrix& b) {
    check_same_size(a.size(), b.size());
    return {a.values.cwiseProduct(b.values)};
}

long frobenius_inner(const SignMatrix& a, const SignMatrix& b) {
    check_same_size(a.size(), b.size());
    return static_cast<long>(a.values.cwiseProduct(b.values).sum());
}

double off_diagonal_agreement(const SignMatrix& a, const SignMatrix& b) {
    check_same_size(a.size(), b.size());
    const auto m = static_cast<Eigen::Index>(a.size());
    if (m < 2) {
        return 1.0;
    }
    std::size_t agree = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index k = 0; k < m; ++k) {
            if (j != k && a.values(j, k) == b.values(j, k)) {
                ++agree;
            }
        }
    }
    return static_cast<double>(agree) / static_cast<double>(m * (m - 1));
}

} // namespace depcon::graph
