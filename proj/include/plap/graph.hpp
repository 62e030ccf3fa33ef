#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "plap/errors.hpp"

namespace plap {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Node-indexed vector (length n).
using NodeVector = VectorX<double>;
/// Edge-indexed vector (length m), in the graph's lexical edge order.
using EdgeVector = VectorX<double>;

/// Undirected edge with k1 < k2.
struct Edge {
  Index k1;
  Index k2;
  double w;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  Index node;
  double w;
};

/**
 * Immutable weighted undirected graph.
 *
 * Edges are stored with k1 < k2 and sorted ascending by (k1, k2). That order
 * defines the rows of the incidence matrix B, which has -1 in column k1 and
 * +1 in column k2. No matrix is ever materialized here; the free functions
 * below apply B, B^T and the diagonal weight operators straight from the
 * edge list.
 */
class Graph {
 public:
  Graph() = default;

  /// Edges given as (a, b, w) with a != b are reoriented to a < b and sorted.
  /// Throws GraphError on self-loops, duplicates, out-of-range nodes or w <= 0.
  Graph(Index num_nodes, std::vector<Edge> edges);

  Index num_nodes() const { return n_; }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(Index k) const { return edges_[static_cast<std::size_t>(k)]; }

  /// Neighbors of node i, ascending by node index.
  std::span<const Neighbor> neighbors(Index i) const {
    const auto begin = adj_offsets_[static_cast<std::size_t>(i)];
    const auto end = adj_offsets_[static_cast<std::size_t>(i) + 1];
    return std::span<const Neighbor>(adjacency_).subspan(begin, end - begin);
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  Index n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> adj_offsets_{0};
  std::vector<Neighbor> adjacency_;
};

/// Bx: result[k] = x[k2] - x[k1].
template <typename Derived>
VectorX<typename Derived::Scalar> incidence_apply(const Graph& g,
                                                  const Eigen::MatrixBase<Derived>& x) {
  detail::require_length(x.size(), g.num_nodes(), "incidence_apply");
  VectorX<typename Derived::Scalar> out(g.num_edges());
  Index k = 0;
  for (const Edge& e : g.edges()) {
    out[k++] = x(e.k2) - x(e.k1);
  }
  return out;
}

/// B^T y: result[i] = sum over edges ending at i minus sum over edges starting at i.
template <typename Derived>
VectorX<typename Derived::Scalar> incidence_transpose_apply(const Graph& g,
                                                            const Eigen::MatrixBase<Derived>& y) {
  detail::require_length(y.size(), g.num_edges(), "incidence_transpose_apply");
  VectorX<typename Derived::Scalar> out = VectorX<typename Derived::Scalar>::Zero(g.num_nodes());
  Index k = 0;
  for (const Edge& e : g.edges()) {
    out[e.k1] -= y(k);
    out[e.k2] += y(k);
    ++k;
  }
  return out;
}

template <typename Scalar = double>
VectorX<Scalar> degree_vector(const Graph& g) {
  VectorX<Scalar> d = VectorX<Scalar>::Zero(g.num_nodes());
  for (const Edge& e : g.edges()) {
    d[e.k1] += Scalar(e.w);
    d[e.k2] += Scalar(e.w);
  }
  return d;
}

/// Diagonal of D^w.
template <typename Scalar = double>
VectorX<Scalar> edge_weight_vector(const Graph& g) {
  VectorX<Scalar> w(g.num_edges());
  Index k = 0;
  for (const Edge& e : g.edges()) w[k++] = Scalar(e.w);
  return w;
}

/// Dense B^T diag(edge_factors) B. With edge_factors = edge weights this is L = D - W.
template <typename Derived>
MatrixX<typename Derived::Scalar> weighted_laplacian(const Graph& g,
                                                     const Eigen::MatrixBase<Derived>& edge_factors) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(edge_factors.size(), g.num_edges(), "weighted_laplacian");
  const Index n = g.num_nodes();
  MatrixX<Scalar> m = MatrixX<Scalar>::Zero(n, n);
  Index k = 0;
  for (const Edge& e : g.edges()) {
    const Scalar c = edge_factors(k++);
    m(e.k1, e.k1) += c;
    m(e.k2, e.k2) += c;
    m(e.k1, e.k2) -= c;
    m(e.k2, e.k1) -= c;
  }
  return m;
}

template <typename Scalar = double>
MatrixX<Scalar> laplacian(const Graph& g) {
  return weighted_laplacian(g, edge_weight_vector<Scalar>(g));
}

bool is_connected(const Graph& g);

/// Connected component id per node, numbered in order of first appearance.
std::vector<Index> connected_components(const Graph& g);

/**
 * Edge-list text format: one `k1 k2 w` triple per line, 0-based node indices,
 * whitespace separated. Lines starting with `#` are comments, except a
 * `#nodes N` header which fixes the node count (otherwise 1 + max index).
 */
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);

/// Writes the `#nodes N` header followed by edges in lexical order, shortest
/// round-trip decimal weights.
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list_file(const std::string& path, const Graph& g);

}  // namespace plap
