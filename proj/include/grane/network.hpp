#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grane/game.hpp"

namespace grane {

/// Undirected simple graph on nodes 0..n-1. Each edge is stored once as (i, j)
/// with i < j, and the edge list is kept sorted.
class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  Graph() = default;
  /// Normalizes orientation and removes duplicates. Throws on self-loops or
  /// out-of-range endpoints.
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t nodes() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<std::size_t> degrees() const;
  std::size_t max_degree() const;
  bool has_edge(std::size_t i, std::size_t j) const;
  bool connected() const;
  /// Combinatorial Laplacian D - A.
  Eigen::MatrixXd laplacian() const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

/// Uniformly random labeled spanning tree (Pruefer decoding).
Graph random_tree(std::size_t n, std::uint64_t seed);
Graph path_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph star_graph(std::size_t n, std::size_t center = 0);

/// Symmetric doubly stochastic weights over a graph plus the spectral data of
/// I - W that every constant formula consumes.
struct MixingMatrix {
  Graph graph;
  Matrix W;
  double sigma_max_IW = 0.0;      // largest singular value of I - W
  double lambda_max_IW = 0.0;     // largest eigenvalue of I - W
  double lambda_min_nz_IW = 0.0;  // smallest nonzero eigenvalue of I - W
};

/// Wraps an arbitrary W and computes its spectral fields. No validation.
MixingMatrix make_mixing(Graph graph, Matrix W);

/// W = I - t L. Default t = 1/(max_degree + 1).
MixingMatrix mixing_from_laplacian(const Graph& g, std::optional<double> t = std::nullopt);

/// Metropolis-Hastings weights w_ij = 1 / (1 + max(deg_i, deg_j)).
MixingMatrix mixing_metropolis(const Graph& g);

struct MixingReport {
  std::vector<std::string> failures;
  std::vector<double> eigenvalues_IW;  // ascending
  bool ok() const { return failures.empty(); }
};

/// Checks symmetry, nonnegativity, unit row and column sums, the spectrum of
/// I - W (inside [-tol, 2 + tol], exactly one eigenvalue within tol of zero) and
/// that the off-diagonal support equals the edge set.
MixingReport validate_mixing(const MixingMatrix& m, double tol);

}  // namespace grane
