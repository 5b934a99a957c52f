#include "grane/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

namespace grane::experiment {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw ConfigError(msg); }

void reject_unknown(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!keys.count(key)) config_error("unknown field '" + where + key + "'");
  }
}

const Json& field(const Json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) config_error("missing field '" + where + key + "'");
  return j.at(key);
}

template <typename T>
T get_as(const Json& j, const std::string& name) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    config_error("field '" + name + "' has the wrong type");
  }
}

double get_number(const Json& j, const std::string& name) {
  if (!j.is_number()) config_error("field '" + name + "' must be a number");
  return j.get<double>();
}

std::size_t get_count(const Json& j, const std::string& name) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    config_error("field '" + name + "' must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

Range get_range(const Json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 2) config_error("field '" + name + "' must be [lo, hi]");
  Range r{get_number(j[0], name + "[0]"), get_number(j[1], name + "[1]")};
  if (!(r.lo <= r.hi)) config_error("field '" + name + "' has lo > hi");
  return r;
}

std::variant<QuadraticFamily, QuadraticGame> parse_game(const Json& j) {
  const std::string where = "game.";
  if (!j.is_object()) config_error("field 'game' must be an object");
  const auto type = get_as<std::string>(field(j, where, "type"), "game.type");
  if (type == "inline") {
    reject_unknown(j, where, {"type", "n", "a", "b", "C", "boxes", "antisymmetric"});
    Json body = j;
    body.erase("type");
    try {
      return quadratic_game_from_json(body);
    } catch (const std::exception& e) {
      config_error(std::string("invalid inline game: ") + e.what());
    }
  }
  if (type != "quadratic") config_error("field 'game.type' must be 'quadratic' or 'inline'");
  reject_unknown(j, where,
                 {"type", "n", "seed", "a_range", "b_range", "c_range", "box_lo_range", "box_width_range",
                  "antisymmetric"});
  QuadraticFamily f;
  f.n = get_count(field(j, where, "n"), "game.n");
  f.seed = get_count(field(j, where, "seed"), "game.seed");
  if (j.contains("a_range")) f.a_range = get_range(j["a_range"], "game.a_range");
  if (j.contains("b_range")) f.b_range = get_range(j["b_range"], "game.b_range");
  if (j.contains("c_range")) f.c_range = get_range(j["c_range"], "game.c_range");
  if (j.contains("box_lo_range")) f.box_lo_range = get_range(j["box_lo_range"], "game.box_lo_range");
  if (j.contains("box_width_range")) f.box_width_range = get_range(j["box_width_range"], "game.box_width_range");
  if (j.contains("antisymmetric")) f.antisymmetric = get_as<bool>(j["antisymmetric"], "game.antisymmetric");
  if (f.n < 2) config_error("field 'game.n' must be >= 2");
  if (!(f.a_range.lo > 0.0)) config_error("field 'game.a_range' must be strictly positive");
  return f;
}

GraphSection parse_graph(const Json& j) {
  const std::string where = "graph.";
  if (!j.is_object()) config_error("field 'graph' must be an object");
  reject_unknown(j, where, {"type", "seed", "edges", "mixing", "t", "n"});
  GraphSection g;
  g.type = get_as<std::string>(field(j, where, "type"), "graph.type");
  if (g.type == "tree") {
    g.seed = get_count(field(j, where, "seed"), "graph.seed");
  } else if (g.type == "inline") {
    const auto& raw = field(j, where, "edges");
    if (!raw.is_array()) config_error("field 'graph.edges' must be an array");
    std::vector<Graph::Edge> edges;
    for (const auto& e : raw) {
      if (!e.is_array() || e.size() != 2) config_error("field 'graph.edges' entries must be [i, j]");
      edges.emplace_back(get_count(e[0], "graph.edges"), get_count(e[1], "graph.edges"));
    }
    // The node count comes from the game; build_setup re-sizes this graph.
    std::size_t max_node = 0;
    for (const auto& [a, b] : edges) max_node = std::max({max_node, a, b});
    try {
      g.inline_graph = Graph(max_node + 1, std::move(edges));
    } catch (const std::exception& e) {
      config_error(std::string("invalid graph.edges: ") + e.what());
    }
  } else if (g.type != "path" && g.type != "complete" && g.type != "star") {
    config_error("field 'graph.type' must be one of tree, path, complete, star, inline");
  }
  if (j.contains("seed") && !g.seed) g.seed = get_count(j["seed"], "graph.seed");
  if (j.contains("mixing")) {
    const auto mixing = get_as<std::string>(j["mixing"], "graph.mixing");
    if (mixing == "lazy-laplacian") {
      g.mixing = MixingKind::lazy_laplacian;
    } else if (mixing == "metropolis") {
      g.mixing = MixingKind::metropolis;
    } else {
      config_error("field 'graph.mixing' must be 'lazy-laplacian' or 'metropolis'");
    }
  }
  if (j.contains("t")) {
    if (g.mixing != MixingKind::lazy_laplacian) config_error("field 'graph.t' only applies to lazy-laplacian mixing");
    g.t = get_number(j["t"], "graph.t");
  }
  return g;
}

AlphaPolicy parse_alpha(const Json& j, const std::string& where) {
  AlphaPolicy p;
  if (j.is_number()) {
    p.kind = AlphaPolicy::Kind::uniform;
    p.value = j.get<double>();
    return p;
  }
  if (!j.is_object()) config_error("field '" + where + "' must be a number or an object");
  reject_unknown(j, where + ".", {"policy", "value", "values"});
  const auto policy = get_as<std::string>(field(j, where + ".", "policy"), where + ".policy");
  if (policy == "uniform") {
    p.kind = AlphaPolicy::Kind::uniform;
    p.value = get_number(field(j, where + ".", "value"), where + ".value");
  } else if (policy == "explicit") {
    p.kind = AlphaPolicy::Kind::explicit_values;
    p.values = get_as<std::vector<double>>(field(j, where + ".", "values"), where + ".values");
  } else if (policy == "restricted-auto") {
    p.kind = AlphaPolicy::Kind::restricted_auto;
  } else {
    config_error("field '" + where + ".policy' must be uniform, explicit, or restricted-auto");
  }
  return p;
}

MonotonicityPath parse_path(const Json& j, const std::string& name) {
  const auto s = get_as<std::string>(j, name);
  if (s == "strong" || s == "lemma2") return MonotonicityPath::strong;
  if (s == "restricted" || s == "lemma3") return MonotonicityPath::restricted;
  config_error("field '" + name + "' must be 'strong' (lemma2) or 'restricted' (lemma3)");
}

SolverEntry parse_solver(const Json& j, std::size_t index) {
  const std::string where = "solvers[" + std::to_string(index) + "].";
  if (!j.is_object()) config_error("field 'solvers[" + std::to_string(index) + "]' must be an object");
  reject_unknown(j, where,
                 {"label", "algorithm", "step", "max_iters", "stop_tol", "trace_stride", "alpha", "path", "beta",
                  "backend"});
  SolverEntry e;
  const auto algorithm = get_as<std::string>(field(j, where, "algorithm"), where + "algorithm");
  if (algorithm == "grane") {
    e.solver.algorithm = Algorithm::grane;
  } else if (algorithm == "acc-grane") {
    e.solver.algorithm = Algorithm::acc_grane;
  } else if (algorithm == "centralized") {
    e.solver.algorithm = Algorithm::centralized;
  } else {
    config_error("field '" + where + "algorithm' must be grane, acc-grane, or centralized");
  }
  e.label = j.contains("label") ? get_as<std::string>(j["label"], where + "label") : algorithm;
  for (char c : e.label) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) {
      config_error("field '" + where + "label' may only contain letters, digits, '-' and '_'");
    }
  }
  if (j.contains("step")) {
    const auto& s = j["step"];
    if (s.is_string() && s.get<std::string>() == "auto") {
      e.solver.step.reset();
    } else {
      e.solver.step = get_number(s, where + "step");
      if (!(*e.solver.step > 0.0)) config_error("field '" + where + "step' must be > 0 or \"auto\"");
    }
  }
  e.solver.max_iters = get_count(field(j, where, "max_iters"), where + "max_iters");
  if (j.contains("stop_tol")) e.solver.stop_tol = get_number(j["stop_tol"], where + "stop_tol");
  if (e.solver.stop_tol < 0.0) config_error("field '" + where + "stop_tol' must be >= 0");
  if (j.contains("trace_stride")) e.solver.trace_stride = get_count(j["trace_stride"], where + "trace_stride");
  if (e.solver.trace_stride == 0) config_error("field '" + where + "trace_stride' must be >= 1");
  if (j.contains("backend")) {
    const auto b = get_as<std::string>(j["backend"], where + "backend");
    if (b == "serial") {
      e.solver.backend = kernels::Backend::serial;
    } else if (b == "parallel") {
      e.solver.backend = kernels::Backend::parallel;
    } else {
      config_error("field '" + where + "backend' must be serial or parallel");
    }
  }
  if (e.solver.algorithm != Algorithm::centralized || j.contains("alpha")) {
    e.alpha = parse_alpha(field(j, where, "alpha"), where + "alpha");
  }
  if (j.contains("path")) e.path = parse_path(j["path"], where + "path");
  if (j.contains("beta")) {
    e.beta = get_number(j["beta"], where + "beta");
    if (!(*e.beta > 0.0)) config_error("field '" + where + "beta' must be > 0");
  }
  return e;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json record_json(const TraceRecord& r) {
  return Json{{"k", r.k},
              {"fro_residual", r.fro_residual},
              {"relative_error", r.relative_error},
              {"normalized_residual", r.normalized_residual},
              {"consensus_gap", r.consensus_gap},
              {"vi_residual", r.vi_residual}};
}

Json optional_count(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

// Centralized gradient play viewed as a run over consensual estimation matrices.
SolverResult run_centralized_entry(const Setup& s, const AugmentedConfig& aug, const SolverEntry& e,
                                   const Matrix& X0, const Matrix& reference) {
  SolverResult out;
  out.trace.label = e.label;
  CentralizedOptions opt;
  opt.step = e.solver.step;
  opt.max_iters = e.solver.max_iters;
  opt.tol = e.solver.stop_tol;
  const Vector x0 = X0.diagonal();
  const Matrix C0 = consensual_matrix(std::span<const double>(x0.data(), static_cast<std::size_t>(x0.size())));
  auto record = [&](std::size_t k, const Vector& x) {
    if (k != 0 && k % e.solver.trace_stride != 0) return;
    const Matrix X = consensual_matrix(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    auto r = residual_metrics(X, &reference, C0, s.game, s.mixing, aug.alpha);
    r.k = k;
    out.trace.records.push_back(r);
  };
  record(0, x0);
  opt.observer = record;
  const auto res = centralized_gradient_play(s.game, opt, std::span<const double>(x0.data(), static_cast<std::size_t>(x0.size())));
  if (out.trace.records.back().k != res.iterations) {
    const Matrix X = consensual_matrix(std::span<const double>(res.x.data(), static_cast<std::size_t>(res.x.size())));
    auto r = residual_metrics(X, &reference, C0, s.game, s.mixing, aug.alpha);
    r.k = res.iterations;
    out.trace.records.push_back(r);
  }
  out.X = consensual_matrix(std::span<const double>(res.x.data(), static_cast<std::size_t>(res.x.size())));
  out.iterations = res.iterations;
  out.converged = res.converged;
  out.step = res.step;
  return out;
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) config_error("config must be a JSON object");
  reject_unknown(j, "", {"name", "game", "graph", "solvers", "reference", "initial", "output"});
  ExperimentConfig cfg;
  cfg.name = j.contains("name") ? get_as<std::string>(j["name"], "name") : "experiment";
  cfg.game = parse_game(field(j, "", "game"));
  cfg.graph = parse_graph(field(j, "", "graph"));
  const auto& solvers = field(j, "", "solvers");
  if (!solvers.is_array() || solvers.empty()) config_error("field 'solvers' must be a non-empty array");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < solvers.size(); ++i) {
    cfg.solvers.push_back(parse_solver(solvers[i], i));
    if (!labels.insert(cfg.solvers.back().label).second) {
      config_error("duplicate solver label '" + cfg.solvers.back().label + "'");
    }
  }
  if (j.contains("reference")) {
    const auto& r = j["reference"];
    if (!r.is_object()) config_error("field 'reference' must be an object");
    reject_unknown(r, "reference.", {"max_iters", "tol", "step"});
    if (r.contains("max_iters")) cfg.reference.max_iters = get_count(r["max_iters"], "reference.max_iters");
    if (r.contains("tol")) cfg.reference.tol = get_number(r["tol"], "reference.tol");
    if (r.contains("step")) {
      if (r["step"].is_string() && r["step"].get<std::string>() == "auto") {
        cfg.reference.step.reset();
      } else {
        cfg.reference.step = get_number(r["step"], "reference.step");
      }
    }
  }
  if (j.contains("initial")) {
    cfg.initial = get_as<std::string>(j["initial"], "initial");
    if (cfg.initial != "zeros" && cfg.initial != "box-center") {
      config_error("field 'initial' must be 'zeros' or 'box-center'");
    }
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    if (!o.is_object()) config_error("field 'output' must be an object");
    reject_unknown(o, "output.", {"dir", "trace_prefix", "summary", "plot_data"});
    cfg.output.dir = o.value("dir", cfg.output.dir);
    cfg.output.trace_prefix = o.value("trace_prefix", cfg.output.trace_prefix);
    cfg.output.summary = o.value("summary", cfg.output.summary);
    cfg.output.plot_data = o.value("plot_data", cfg.output.plot_data);
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  const std::string text = read_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

Setup build_setup(const ExperimentConfig& cfg) {
  QuadraticGame q;
  try {
    q = std::holds_alternative<QuadraticGame>(cfg.game) ? std::get<QuadraticGame>(cfg.game)
                                                        : make_quadratic_game(std::get<QuadraticFamily>(cfg.game));
    q.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid game: ") + e.what());
  }
  const std::size_t n = q.players();
  Graph graph;
  const auto& g = cfg.graph;
  try {
    if (g.type == "tree") {
      graph = random_tree(n, *g.seed);
    } else if (g.type == "path") {
      graph = path_graph(n);
    } else if (g.type == "complete") {
      graph = complete_graph(n);
    } else if (g.type == "star") {
      graph = star_graph(n, 0);
    } else {
      if (g.inline_graph->nodes() > n) throw ConfigError("graph.edges reference nodes beyond the game size");
      graph = Graph(n, g.inline_graph->edges());
    }
    if (!graph.connected()) throw ConfigError("graph is disconnected");
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid graph: ") + e.what());
  }
  MixingMatrix mixing;
  try {
    mixing = g.mixing == MixingKind::metropolis ? mixing_metropolis(graph) : mixing_from_laplacian(graph, g.t);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid mixing: ") + e.what());
  }
  Game game = q.to_game();
  return Setup{std::move(q), std::move(game), std::move(mixing)};
}

AugmentedConfig resolve_augmented(const Setup& setup, const SolverEntry& entry) {
  try {
    return make_augmented_config(setup.game.constants(), setup.mixing, entry.alpha, entry.path, entry.beta);
  } catch (const InvalidArgument& e) {
    throw ConfigError("solver '" + entry.label + "': " + e.what());
  }
}

Matrix initial_matrix(const ExperimentConfig& cfg, const Game& game) {
  const auto n = static_cast<Eigen::Index>(game.players());
  Matrix X = Matrix::Zero(n, n);
  if (cfg.initial == "box-center") {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Box& b = game.boxes()[static_cast<std::size_t>(i)];
      X(i, i) = b.bounded() ? 0.5 * (b.lo + b.hi) : 0.0;
    }
  }
  return project_Omega_a(game.boxes(), std::move(X));
}

fs::path output_directory(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("GRANE_OUTPUT_DIR"); env && *env) return fs::path(env);
  return fs::path(cfg.output.dir);
}

ValidationReport validate_config(const fs::path& path) {
  ValidationReport report;
  ExperimentConfig cfg;
  try {
    cfg = load_config(path);
  } catch (const ConfigError& e) {
    report.errors.emplace_back(e.what());
    return report;
  }
  std::optional<Setup> setup;
  try {
    setup = build_setup(cfg);
  } catch (const ConfigError& e) {
    report.errors.emplace_back(e.what());
    return report;
  }
  const auto mix = validate_mixing(setup->mixing, 1e-10);
  for (const auto& f : mix.failures) report.errors.push_back("mixing matrix: " + f);
  for (const auto& entry : cfg.solvers) {
    try {
      const auto aug = resolve_augmented(*setup, entry);
      if (entry.solver.algorithm == Algorithm::acc_grane && !aug.mu_Fa) {
        report.warnings.push_back("solver '" + entry.label + "': mu_Fa undefined; acc-grane needs the strong path");
      }
    } catch (const MissingConstant& e) {
      const std::string hint = entry.path == MonotonicityPath::strong
                                   ? "mu_Fa undefined; use lemma3 (\"path\": \"restricted\")"
                                   : "mu_r_Fa undefined";
      report.warnings.push_back("solver '" + entry.label + "': " + hint + " [" + e.what() + "]");
    } catch (const ConfigError& e) {
      report.errors.emplace_back(e.what());
    }
  }
  return report;
}

Json constants_summary(const ExperimentConfig& cfg) {
  const Setup s = build_setup(cfg);
  Json out;
  out["name"] = cfg.name;
  out["players"] = s.game.players();
  out["game_constants"] = to_json(s.game.constants());
  out["mixing"] = Json{{"sigma_max", s.mixing.sigma_max_IW},
                       {"lambda_max", s.mixing.lambda_max_IW},
                       {"lambda_min_nz", s.mixing.lambda_min_nz_IW}};
  Json solvers = Json::array();
  for (const auto& entry : cfg.solvers) {
    Json j;
    j["label"] = entry.label;
    j["algorithm"] = to_string(entry.solver.algorithm);
    try {
      const auto aug = resolve_augmented(s, entry);
      j["constants"] = constants_report(aug, condition_numbers(aug, s.game.constants(), s.mixing));
      if (entry.solver.algorithm == Algorithm::acc_grane) {
        j["step"] = 1.0 / aug.L_Fa;
      } else if (entry.solver.algorithm == Algorithm::grane) {
        j["step"] = entry.solver.step ? *entry.solver.step : aug.auto_step();
      }
    } catch (const MissingConstant& e) {
      j["error"] = e.what();
    }
    solvers.push_back(j);
  }
  out["solvers"] = solvers;
  return out;
}

RunArtifacts run_experiment(const ExperimentConfig& cfg, const fs::path& output_dir) {
  const Setup s = build_setup(cfg);
  const Matrix X0 = initial_matrix(cfg, s.game);
  const Vector x0 = X0.diagonal();
  const auto ref = centralized_gradient_play(s.game, cfg.reference,
                                             std::span<const double>(x0.data(), static_cast<std::size_t>(x0.size())));
  const Matrix X_ref = consensual_matrix(std::span<const double>(ref.x.data(), static_cast<std::size_t>(ref.x.size())));

  // Resolve every constant up front so a missing one fails before any work.
  std::vector<AugmentedConfig> augmented;
  for (const auto& entry : cfg.solvers) {
    augmented.push_back(resolve_augmented(s, entry));
    if (entry.solver.algorithm == Algorithm::acc_grane && !augmented.back().mu_Fa) {
      throw MissingConstant("solver '" + entry.label + "': mu_Fa undefined; acc-grane requires the strong path");
    }
  }

  auto run_one = [&](std::size_t i) {
    const auto& entry = cfg.solvers[i];
    const auto& aug = augmented[i];
    SolverResult r;
    switch (entry.solver.algorithm) {
      case Algorithm::grane:
        r = grane_run(s.game, s.mixing, aug, entry.solver, X0, &X_ref);
        break;
      case Algorithm::acc_grane:
        r = acc_grane_run(s.game, s.mixing, aug, entry.solver, X0, &X_ref);
        break;
      case Algorithm::centralized:
        r = run_centralized_entry(s, aug, entry, X0, X_ref);
        break;
    }
    r.trace.label = entry.label;
    return r;
  };

  std::vector<SolverResult> results(cfg.solvers.size());
  if (cfg.solvers.size() == 1) {
    results[0] = run_one(0);
  } else {
    std::vector<std::future<SolverResult>> pending;
    for (std::size_t i = 0; i < cfg.solvers.size(); ++i) pending.push_back(std::async(std::launch::async, run_one, i));
    for (std::size_t i = 0; i < pending.size(); ++i) results[i] = pending[i].get();
  }

  RunArtifacts art;
  Json summary;
  summary["name"] = cfg.name;
  summary["players"] = s.game.players();
  summary["game"] = to_json(s.quadratic);
  summary["game_constants"] = to_json(s.game.constants());
  summary["graph"] = to_json(s.mixing.graph);
  summary["mixing"] = Json{{"construction", cfg.graph.mixing == MixingKind::metropolis ? "metropolis" : "lazy-laplacian"},
                           {"sigma_max", s.mixing.sigma_max_IW},
                           {"lambda_max", s.mixing.lambda_max_IW},
                           {"lambda_min_nz", s.mixing.lambda_min_nz_IW}};
  summary["reference"] = Json{{"x", std::vector<double>(ref.x.data(), ref.x.data() + ref.x.size())},
                              {"iterations", ref.iterations},
                              {"converged", ref.converged},
                              {"step", ref.step}};
  Json solvers = Json::array();
  fs::create_directories(output_dir);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& entry = cfg.solvers[i];
    const auto& r = results[i];
    const auto trace_path = output_dir / (cfg.output.trace_prefix + entry.label + ".csv");
    {
      std::ofstream f(trace_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + trace_path.string());
      write_trace_csv(f, r.trace);
    }
    art.written.push_back(trace_path);
    Json j;
    j["label"] = entry.label;
    j["algorithm"] = to_string(entry.solver.algorithm);
    j["constants"] = constants_report(augmented[i], condition_numbers(augmented[i], s.game.constants(), s.mixing));
    j["step"] = r.step;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["final"] = record_json(r.trace.records.back());
    j["iterations_to"] = Json{{"1e-2", optional_count(r.trace.iterations_to(1e-2))},
                              {"1e-4", optional_count(r.trace.iterations_to(1e-4))},
                              {"1e-6", optional_count(r.trace.iterations_to(1e-6))}};
    j["trace"] = trace_path.filename().string();
    solvers.push_back(j);
    art.traces.push_back(r.trace);
  }
  summary["solvers"] = solvers;

  const auto plot_path = output_dir / cfg.output.plot_data;
  {
    std::ofstream f(plot_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + plot_path.string());
    write_plot_csv(f, art.traces);
  }
  art.written.push_back(plot_path);
  const auto summary_path = output_dir / cfg.output.summary;
  {
    std::ofstream f(summary_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + summary_path.string());
    f << summary.dump(2) << '\n';
  }
  art.written.push_back(summary_path);
  art.summary = std::move(summary);
  return art;
}

}  // namespace grane::experiment
