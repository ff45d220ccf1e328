#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string_view>
#include <vector>

namespace depcon::graph {

/// Edge between an ordered vertex pair (j, k), read from j's side.
enum class EdgeType {
    None,
    TailTail,   ///< j -- k
    ArrowArrow, ///< j <-> k
    TailArrow,  ///< j -> k
    ArrowTail,  ///< j <- k
};

/// The same edge read from the other endpoint.
constexpr EdgeType mirror(EdgeType e) noexcept {
    switch (e) {
        case EdgeType::TailArrow: return EdgeType::ArrowTail;
        case EdgeType::ArrowTail: return EdgeType::TailArrow;
        default: return e;
    }
}

/// "--", "<->", "->", "<-", or "none".
std::string_view to_string(EdgeType e) noexcept;
EdgeType parse_edge_type(std::string_view text);

/// Mixed graph over m vertices. Edges are stored once per unordered pair with
/// the lower vertex first; edge(k, j) returns mirror(edge(j, k)).
class MixedGraph {
public:
    explicit MixedGraph(std::size_t m);

    std::size_t vertex_count() const noexcept { return m_; }

    EdgeType edge(std::size_t j, std::size_t k) const;
    /// Throws InvalidVertex for out-of-range or equal endpoints.
    void set_edge(std::size_t j, std::size_t k, EdgeType e);

    /// Whether the edge (j, k) has an arrowhead at k.
    bool arrowhead_at(std::size_t j, std::size_t k) const;

    friend bool operator==(const MixedGraph&, const MixedGraph&) = default;

private:
    std::size_t slot(std::size_t j, std::size_t k) const;

    std::size_t m_;
    std::vector<EdgeType> edges_; // upper triangle, row-major
};

/// Checks ancestral validity: no directed cycle, no vertex that is both a
/// spouse (via <->) and an ancestor of its spouse, and no arrowhead at an
/// endpoint of an undirected edge.
bool is_ancestral(const MixedGraph& g);

/// Whether j and k are m-connected given the empty set, i.e. joined by a path
/// on which no intermediate vertex is a collider.
bool m_connected_empty(const MixedGraph& g, std::size_t j, std::size_t k);

/// Bidirected graph encoding the unconditional m-connection relation.
class BidirectedRepresentative {
public:
    explicit BidirectedRepresentative(std::size_t m);
    /// Takes a symmetric boolean matrix with a false diagonal.
    static BidirectedRepresentative from_matrix(const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& connected);
    /// All pairs connected: the identity of the Hamming similarity product.
    static BidirectedRepresentative complete(std::size_t m);

    std::size_t vertex_count() const noexcept { return m_; }
    bool connected(std::size_t j, std::size_t k) const;
    void set_connected(std::size_t j, std::size_t k, bool value);

    /// The bidirected graph with <-> exactly on connected pairs.
    MixedGraph to_graph() const;

    friend bool operator==(const BidirectedRepresentative&, const BidirectedRepresentative&) = default;

private:
    std::size_t m_;
    std::vector<bool> connected_; // full m x m, row-major
};

/// Throws InvalidGraph when g is not ancestral.
BidirectedRepresentative representative(const MixedGraph& g);

/// Bidirected graph with <-> on every pair whose edge types agree (absence included).
MixedGraph hamming_product(const MixedGraph& g, const MixedGraph& h);
BidirectedRepresentative hamming_product(const BidirectedRepresentative& u, const BidirectedRepresentative& v);

/// Number of ordered off-diagonal vertex pairs on which u and v disagree.
std::size_t graph_distance(const BidirectedRepresentative& u, const BidirectedRepresentative& v);

/// m x m matrix with entries +1/-1, +1 on the diagonal, symmetric.
struct SignMatrix {
    Eigen::MatrixXi values;

    std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
    friend bool operator==(const SignMatrix& a, const SignMatrix& b) { return a.values == b.values; }
};

/// +1 where connected or on the diagonal, -1 elsewhere.
SignMatrix sign_map(const BidirectedRepresentative& u);

/// +1 where the entry is strictly positive or on the diagonal, -1 elsewhere.
/// Throws NotSquare.
SignMatrix sign_of_statistic(const Eigen::MatrixXd& statistic);

/// Elementwise product.
SignMatrix operator*(const SignMatrix& a, const SignMatrix& b);

long frobenius_inner(const SignMatrix& a, const SignMatrix& b);

/// Fraction of off-diagonal entries on which the two sign matrices agree.
double off_diagonal_agreement(const SignMatrix& a, const SignMatrix& b);

} // namespace depcon::graph
