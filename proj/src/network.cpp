#include "grane/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace grane {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
  for (auto& [i, j] : edges) {
    if (i >= n || j >= n) throw InvalidArgument("graph edge endpoint out of range");
    if (i == j) throw InvalidArgument("graph self-loops are not allowed");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> deg(n_, 0);
  for (const auto& [i, j] : edges_) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

std::size_t Graph::max_degree() const {
  const auto deg = degrees();
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

bool Graph::connected() const {
  if (n_ == 0) return false;
  std::vector<std::vector<std::size_t>> adj(n_);
  for (const auto& [i, j] : edges_) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<bool> seen(n_, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop();
    for (auto v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        frontier.push(v);
      }
    }
  }
  return count == n_;
}

Eigen::MatrixXd Graph::laplacian() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : edges_) {
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(j);
    L(a, b) -= 1.0;
    L(b, a) -= 1.0;
    L(a, a) += 1.0;
    L(b, b) += 1.0;
  }
  return L;
}

Graph random_tree(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("random_tree: n >= 2 required");
  Sampler rng(seed);
  std::vector<std::size_t> code(n - 2);
  for (auto& c : code) c = rng.below(n);

  std::vector<std::size_t> degree(n, 1);
  for (auto c : code) ++degree[c];
  std::set<std::size_t> leaves;
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] == 1) leaves.insert(v);
  }
  std::vector<Graph::Edge> edges;
  edges.reserve(n - 1);
  for (auto c : code) {
    const auto leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.emplace_back(leaf, c);
    if (--degree[c] == 1) leaves.insert(c);
  }
  const auto u = *leaves.begin();
  const auto v = *std::next(leaves.begin());
  edges.emplace_back(u, v);
  return Graph(n, std::move(edges));
}

Graph path_graph(std::size_t n) {
  std::vector<Graph::Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, std::move(edges));
}

Graph complete_graph(std::size_t n) {
  std::vector<Graph::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Graph(n, std::move(edges));
}

Graph star_graph(std::size_t n, std::size_t center) {
  if (center >= n) throw InvalidArgument("star_graph: center out of range");
  std::vector<Graph::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != center) edges.emplace_back(center, i);
  }
  return Graph(n, std::move(edges));
}

MixingMatrix make_mixing(Graph graph, Matrix W) {
  const auto n = static_cast<Eigen::Index>(graph.nodes());
  if (W.rows() != n || W.cols() != n) throw InvalidArgument("mixing matrix size does not match graph");
  MixingMatrix m;
  m.graph = std::move(graph);
  m.W = std::move(W);

  const Eigen::MatrixXd IW = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd(m.W);
  // I - W is symmetric for valid inputs; symmetrize so the solver sees exact symmetry.
  const Eigen::MatrixXd sym = 0.5 * (IW + IW.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = eig.eigenvalues();
  m.lambda_max_IW = ev.maxCoeff();
  m.sigma_max_IW = ev.cwiseAbs().maxCoeff();
  const double zero_tol = 1e-10 * std::max(1.0, m.sigma_max_IW);
  m.lambda_min_nz_IW = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (std::abs(ev[k]) > zero_tol) {
      if (m.lambda_min_nz_IW == 0.0 || std::abs(ev[k]) < m.lambda_min_nz_IW) m.lambda_min_nz_IW = std::abs(ev[k]);
    }
  }
  return m;
}

MixingMatrix mixing_from_laplacian(const Graph& g, std::optional<double> t) {
  if (!g.connected()) throw InvalidArgument("mixing_from_laplacian: graph is disconnected");
  const Eigen::MatrixXd L = g.laplacian();
  const auto delta = static_cast<double>(g.max_degree());
  double step = 1.0 / (delta + 1.0);
  if (t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(L, Eigen::EigenvaluesOnly);
    const double lmax = eig.eigenvalues().maxCoeff();
    if (!(*t > 0.0) || !(*t < 2.0 / lmax) || *t > 1.0 / delta) {
      std::ostringstream msg;
      msg << "mixing_from_laplacian: t=" << *t << " outside (0, min(2/lambda_max(L)=" << 2.0 / lmax
          << ", 1/max_degree=" << 1.0 / delta << "]";
      throw InvalidArgument(msg.str());
    }
    step = *t;
  }
  const auto n = static_cast<Eigen::Index>(g.nodes());
  Matrix W = Matrix::Identity(n, n) - step * Matrix(L);
  return make_mixing(g, std::move(W));
}

MixingMatrix mixing_metropolis(const Graph& g) {
  if (!g.connected()) throw InvalidArgument("mixing_metropolis: graph is disconnected");
  const auto deg = g.degrees();
  const auto n = static_cast<Eigen::Index>(g.nodes());
  Matrix W = Matrix::Zero(n, n);
  for (const auto& [i, j] : g.edges()) {
    const double w = 1.0 / (1.0 + static_cast<double>(std::max(deg[i], deg[j])));
    W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
    W(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = w;
  }
  for (Eigen::Index i = 0; i < n; ++i) W(i, i) = 1.0 - W.row(i).sum();
  return make_mixing(g, std::move(W));
}

MixingReport validate_mixing(const MixingMatrix& m, double tol) {
  MixingReport report;
  const auto n = static_cast<Eigen::Index>(m.graph.nodes());
  const Matrix& W = m.W;
  if (W.rows() != n || W.cols() != n) {
    report.failures.push_back("shape: W is not n x n");
    return report;
  }
  auto fail = [&report](const std::string& what, double value) {
    std::ostringstream msg;
    msg << what << " (" << value << ")";
    report.failures.push_back(msg.str());
  };

  const double asym = (W - W.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol) fail("symmetry: max |W - W^T|", asym);

  const double most_negative = W.minCoeff();
  if (most_negative < -tol) fail("nonnegativity: min entry", most_negative);

  const double row_err = (W.rowwise().sum().array() - 1.0).abs().maxCoeff();
  if (row_err > tol) fail("row sums: max |W 1 - 1|", row_err);
  const double col_err = (W.colwise().sum().array() - 1.0).abs().maxCoeff();
  if (col_err > tol) fail("column sums: max |1^T W - 1^T|", col_err);

  const Eigen::MatrixXd IW = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd(W);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (IW + IW.transpose()), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = eig.eigenvalues();
  report.eigenvalues_IW.assign(ev.data(), ev.data() + ev.size());
  if (ev.minCoeff() < -tol) fail("spectrum: min eigenvalue of I - W below 0", ev.minCoeff());
  if (ev.maxCoeff() > 2.0 + tol) fail("spectrum: max eigenvalue of I - W above 2", ev.maxCoeff());
  const auto near_zero = (ev.array().abs() <= tol).count();
  if (near_zero != 1) fail("null space: eigenvalues of I - W within tol of 0", static_cast<double>(near_zero));

  std::size_t pattern_errors = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool edge = m.graph.has_edge(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      const bool positive = W(i, j) > tol;
      if (edge != positive) ++pattern_errors;
    }
  }
  if (pattern_errors > 0) fail("sparsity pattern: off-diagonal entries disagreeing with edges", static_cast<double>(pattern_errors));
  return report;
}

}  // namespace grane
