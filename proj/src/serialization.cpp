#include "grane/serialization.hpp"

#include <cmath>
#include <limits>

namespace grane {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Json side(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double read_side(const Json& j, double fallback) { return j.is_null() ? fallback : j.get<double>(); }

template <typename Row>
Json row_array(const Row& row) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < row.size(); ++k) out.push_back(row[k]);
  return out;
}

Json matrix_array(const Matrix& M) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) out.push_back(row_array(M.row(i)));
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

Json to_json(const QuadraticGame& q) {
  Json j;
  j["n"] = q.players();
  j["a"] = row_array(q.a);
  j["b"] = row_array(q.b);
  j["C"] = matrix_array(q.C);
  Json boxes = Json::array();
  for (const Box& b : q.boxes) boxes.push_back(Json::array({side(b.lo), side(b.hi)}));
  j["boxes"] = boxes;
  j["antisymmetric"] = q.antisymmetric;
  return j;
}

QuadraticGame quadratic_game_from_json(const Json& j) {
  require(j.is_object(), "game: expected an object");
  for (const char* key : {"n", "a", "b", "C", "boxes"}) {
    require(j.contains(key), std::string("game: missing field '") + key + "'");
  }
  const auto n = j.at("n").get<std::size_t>();
  require(n >= 1, "game: n must be >= 1");
  const auto& a = j.at("a");
  const auto& b = j.at("b");
  const auto& C = j.at("C");
  const auto& boxes = j.at("boxes");
  require(a.is_array() && a.size() == n, "game: 'a' must have n entries");
  require(b.is_array() && b.size() == n, "game: 'b' must have n entries");
  require(C.is_array() && C.size() == n, "game: 'C' must be n x n");
  require(boxes.is_array() && boxes.size() == n, "game: 'boxes' must have n entries");

  QuadraticGame q;
  const auto N = static_cast<Eigen::Index>(n);
  q.a.resize(N);
  q.b.resize(N);
  q.C.resize(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    q.a[i] = a[ui].get<double>();
    q.b[i] = b[ui].get<double>();
    require(C[ui].is_array() && C[ui].size() == n, "game: 'C' must be n x n");
    for (Eigen::Index k = 0; k < N; ++k) q.C(i, k) = C[ui][static_cast<std::size_t>(k)].get<double>();
    const auto& box = boxes[ui];
    require(box.is_array() && box.size() == 2, "game: each box is [lo, hi]");
    q.boxes.push_back(Box{read_side(box[0], -kInf), read_side(box[1], kInf)});
  }
  q.antisymmetric = j.value("antisymmetric", false);
  q.validate();
  return q;
}

Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& [i, k] : g.edges()) edges.push_back(Json::array({i, k}));
  return Json{{"n", g.nodes()}, {"edges", edges}};
}

Graph graph_from_json(const Json& j) {
  require(j.is_object() && j.contains("n") && j.contains("edges"), "graph: expected {n, edges}");
  std::vector<Graph::Edge> edges;
  for (const auto& e : j.at("edges")) {
    require(e.is_array() && e.size() == 2, "graph: each edge is [i, j]");
    edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  return Graph(j.at("n").get<std::size_t>(), std::move(edges));
}

Json to_json(const MixingMatrix& m) {
  return Json{{"W", matrix_array(m.W)}, {"sigma_max", m.sigma_max_IW}, {"lambda_min_nz", m.lambda_min_nz_IW}};
}

Json to_json(const GameConstants& k) {
  return Json{{"mu_F", k.mu_F},     {"mu_r", k.mu_r},         {"L_own", k.L_own},
              {"L_other", k.L_other}, {"mu_F_clamped", k.mu_F_clamped}};
}

Json constants_report(const AugmentedConfig& cfg, const ConditionReport& r) {
  Json j;
  j["alpha"] = cfg.alpha;
  j["path"] = to_string(cfg.path);
  j["L_Fa"] = cfg.L_Fa;
  if (cfg.mu_Fa) j["mu_Fa"] = *cfg.mu_Fa;
  if (cfg.mu_r_Fa) j["mu_r_Fa"] = *cfg.mu_r_Fa;
  if (cfg.beta) j["beta"] = *cfg.beta;
  j["gamma"] = r.gamma;
  j["C"] = r.C ? Json(*r.C) : Json(nullptr);
  j["alpha_recommended"] = r.alpha_recommended ? Json(*r.alpha_recommended) : Json(nullptr);
  j["small_coupling"] = r.small_coupling;
  j["alpha_is_recommended"] = r.alpha_is_recommended;
  j["gamma_at_recommended"] = r.gamma_at_recommended ? Json(*r.gamma_at_recommended) : Json(nullptr);
  j["bound"] = r.bound ? Json(*r.bound) : Json(nullptr);
  j["bound_holds"] = r.bound_holds ? Json(*r.bound_holds) : Json(nullptr);
  j["bound_corrected"] = r.bound_corrected ? Json(*r.bound_corrected) : Json(nullptr);
  j["bound_corrected_holds"] = r.bound_corrected_holds ? Json(*r.bound_corrected_holds) : Json(nullptr);
  return j;
}

}  // namespace grane
