// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "grane/experiment.hpp"
#include "oracles.hpp"

using namespace grane;
namespace ex = grane::experiment;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = GRANE_CONFIG_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Clock {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Loaded {
  ex::ExperimentConfig cfg;
  ex::Setup setup;
  Matrix X_star;
};

Loaded load(const char* name) {
  auto cfg = ex::load_config(kConfigs / name);
  auto setup = ex::build_setup(cfg);
  Matrix X_star = oracle::replicate(oracle::quadratic_ne(setup.quadratic));
  return Loaded{std::move(cfg), std::move(setup), std::move(X_star)};
}

Matrix sample_matrix(Sampler& s, Eigen::Index n, double r) {
  Matrix X(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) X(i, j) = s.uniform(-r, r);
  }
  return X;
}

// Slope of log(residual^2) against k over records still above the round-off floor.
double log_sq_slope(const ConvergenceTrace& t, double floor) {
  std::vector<double> ks, ys;
  for (const auto& r : t.records) {
    if (!(r.normalized_residual > floor)) break;
    ks.push_back(static_cast<double>(r.k));
    ys.push_back(2.0 * std::log(r.fro_residual));
  }
  return oracle::ls_slope(ks, ys);
}

Outcome criterion1() {
  Clock clock;
  const auto L = load("g2.json");
  const auto& s = L.setup;
  const auto& entry = L.cfg.solvers[0];
  const auto aug = ex::resolve_augmented(s, entry);
  const Matrix X0 = ex::initial_matrix(L.cfg, s.game);
  const auto run = grane_run(s.game, s.mixing, aug, entry.solver, X0, &L.X_star);
  const std::vector<double> x0{X0(0, 0), X0(1, 1)};
  const auto central = centralized_gradient_play(s.game, L.cfg.reference, x0);
  const double seconds = clock.seconds();

  const double diag_err = std::max(std::abs(run.X(0, 0) - 0.8), std::abs(run.X(1, 1) - 0.4));
  const double central_err = std::max(std::abs(central.x[0] - 0.8), std::abs(central.x[1] - 0.4));
  const auto& last = run.trace.records.back();
  const bool ok = diag_err <= 1e-6 && central_err <= 1e-6 && last.consensus_gap <= 1e-6 && last.vi_residual <= 1e-6 &&
                  seconds < 1.0;
  return {ok, fmt("diag err %.3g, oracle err %.3g, consensus gap %.3g, vi residual %.3g, %.3f s", diag_err,
                  central_err, last.consensus_gap, last.vi_residual, seconds)};
}

Outcome criterion2() {
  const auto L = load("g2.json");
  const auto& s = L.setup;
  const auto& entry = L.cfg.solvers[0];
  const auto aug = ex::resolve_augmented(s, entry);
  auto sc = entry.solver;
  sc.trace_stride = 1;
  const auto run = grane_run(s.game, s.mixing, aug, sc, ex::initial_matrix(L.cfg, s.game), &L.X_star);
  const double rho = 1.0 - 1.0 / (aug.gamma * aug.gamma);
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  for (std::size_t k = 1; k < run.trace.records.size(); ++k) {
    const double prev = run.trace.records[k - 1].fro_residual;
    const double cur = run.trace.records[k].fro_residual;
    const double excess = cur * cur - (rho * prev * prev + 1e-12);
    worst = std::max(worst, excess);
    if (excess > 0.0) ++violations;
  }
  const double slope = log_sq_slope(run.trace, 1e-10);
  const bool gamma_ok = std::abs(aug.gamma - 6.4721) <= 1e-4;
  const bool ok = gamma_ok && violations == 0 && slope <= -1.0 / (aug.gamma * aug.gamma);
  return {ok, fmt("gamma %.6f, %zu contraction violations (worst excess %.3g), slope %.5f vs bound %.5f", aug.gamma,
                  violations, worst, slope, -1.0 / (aug.gamma * aug.gamma))};
}

Outcome criterion3() {
  const auto L = load("accel.json");
  const auto& s = L.setup;
  const Matrix X0 = ex::initial_matrix(L.cfg, s.game);
  const auto& ge = L.cfg.solvers[0];
  const auto& ae = L.cfg.solvers[1];
  const auto g_aug = ex::resolve_augmented(s, ge);
  const auto a_aug = ex::resolve_augmented(s, ae);
  const auto g = grane_run(s.game, s.mixing, g_aug, ge.solver, X0, &L.X_star);
  const auto a = acc_grane_run(s.game, s.mixing, a_aug, ae.solver, X0, &L.X_star);
  const double gamma = a_aug.gamma;
  const auto kg = g.trace.iterations_to(1e-4);
  const auto ka = a.trace.iterations_to(1e-4);
  const double slope = log_sq_slope(a.trace, 1e-10);
  const double need = -(gamma / 4.0) / (gamma * gamma);
  const bool ok = gamma >= 20.0 && ka && kg && *ka < *kg && slope <= need;
  return {ok, fmt("gamma %.4f, iterations to 1e-4: acc %lld vs grane %lld, acc slope %.5f vs required %.5f", gamma,
                  ka ? static_cast<long long>(*ka) : -1LL, kg ? static_cast<long long>(*kg) : -1LL, slope, need)};
}

Outcome criterion4() {
  Clock clock;
  const auto L = load("g2r.json");
  const auto& s = L.setup;
  const auto& entry = L.cfg.solvers[0];
  const auto aug = ex::resolve_augmented(s, entry);
  const double mu = aug.mu_r_Fa.value_or(0.0);
  if (!(mu > 0.0)) return {false, "mu_r_Fa not positive"};
  const double step = mu / (aug.L_Fa * aug.L_Fa);
  const double gamma = aug.L_Fa / mu;
  const double rho = 1.0 - 1.0 / (gamma * gamma);

  const std::vector<double> x0{0.0, 0.0};
  const auto central = centralized_gradient_play(s.game, L.cfg.reference, x0);
  const Matrix X_ref = oracle::replicate(central.x);

  Matrix X = ex::initial_matrix(L.cfg, s.game);
  Matrix next(2, 2);
  const std::size_t cap = 1000000;
  std::size_t violations = 0;
  std::size_t k = 0;
  double err = (X - X_ref).cwiseAbs().maxCoeff();
  double prev_sq = (X - X_ref).squaredNorm();
  const double start_sq = prev_sq;
  while (k < cap && err > 1e-4) {
    kernels::projected_step_serial(s.game, s.mixing.W, aug.alpha, step, X, next);
    X.swap(next);
    ++k;
    const double sq = (X - X_ref).squaredNorm();
    if (sq > rho * prev_sq + 1e-12) ++violations;
    prev_sq = sq;
    err = (X - X_ref).cwiseAbs().maxCoeff();
  }
  const double seconds = clock.seconds();
  const bool converged = err <= 1e-4;
  // Iterations an uncapped run would need at the observed average rate.
  const double per_step = std::log(prev_sq / start_sq) / static_cast<double>(k);
  const double needed = 2.0 * std::log(1e-4 / std::sqrt(start_sq)) / per_step;
  const bool ok = mu > 0.0 && violations == 0 && converged && seconds < 30.0;
  return {ok, fmt("mu_r_Fa %.6g, gamma_r %.2f, step %.4g, %zu contraction violations, max error %.4g after %zu "
                  "iterations (cap %zu; ~%.3g needed at the observed rate), %.2f s",
                  mu, gamma, step, violations, err, k, cap, needed, seconds)};
}

struct CertCounts {
  std::size_t lipschitz = 0;
  std::size_t strong = 0;
  std::size_t restricted = 0;
  bool strong_checked = false;
};

CertCounts certify(const Loaded& L, const AugmentedConfig& cfg, const std::optional<AugmentedConfig>& restricted,
                   std::uint64_t seed) {
  CertCounts c;
  const auto& s = L.setup;
  const auto n = static_cast<Eigen::Index>(s.game.players());
  Sampler rng(seed);
  c.strong_checked = cfg.mu_Fa.has_value();
  for (int t = 0; t < 1000; ++t) {
    const Matrix X = sample_matrix(rng, n, 10.0);
    const Matrix Y = sample_matrix(rng, n, 10.0);
    const Matrix D = X - Y;
    const Matrix FD = eval_F_a(s.game, s.mixing, cfg.alpha, X) - eval_F_a(s.game, s.mixing, cfg.alpha, Y);
    if (FD.norm() > cfg.L_Fa * D.norm() + 1e-9) ++c.lipschitz;
    if (cfg.mu_Fa && fro_inner(FD, D) < *cfg.mu_Fa * D.squaredNorm() - 1e-9) ++c.strong;
    if (restricted) {
      const Matrix Xp = project_Omega_a(s.game.boxes(), X);
      const Matrix E = Xp - L.X_star;
      const Matrix F = eval_F_a(s.game, s.mixing, restricted->alpha, Xp);
      if (fro_inner(F, E) < *restricted->mu_r_Fa * E.squaredNorm() - 1e-9) ++c.restricted;
    }
  }
  return c;
}

Outcome criterion5() {
  std::ostringstream detail;
  bool ok = true;
  const AlphaPolicy auto_alpha{AlphaPolicy::Kind::restricted_auto, 0.0, {}};
  for (const char* name : {"g2.json", "g2r.json", "paper_sec5.json"}) {
    const auto L = load(name);
    const auto cfg = ex::resolve_augmented(L.setup, L.cfg.solvers[0]);
    const auto restricted = make_augmented_config(L.setup.game.constants(), L.setup.mixing, auto_alpha,
                                                  MonotonicityPath::restricted);
    const auto c = certify(L, cfg, restricted, 1234);
    ok = ok && c.lipschitz == 0 && c.strong == 0 && c.restricted == 0;
    detail << L.cfg.name << ": L " << c.lipschitz << ", mu " << (c.strong_checked ? std::to_string(c.strong) : "n/a")
           << ", mu_r " << c.restricted << "; ";
  }
  std::string d = detail.str();
  d = "violations of 1000 pairs (" + d.substr(0, d.size() - 2) + ")";
  return {ok, d};
}

Outcome criterion6() {
  std::size_t failures = 0;
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 2 + seed % 39;
    const auto g = random_tree(n, 9000 + seed);
    for (const auto& m : {mixing_from_laplacian(g), mixing_metropolis(g)}) {
      ++checked;
      if (!validate_mixing(m, 1e-10).ok()) ++failures;
    }
  }
  return {failures == 0, fmt("%zu of %zu mixing matrices failed validation", failures, checked)};
}

Outcome criterion7() {
  std::ostringstream detail;
  bool ok = true;
  for (const char* name : {"g2.json", "paper_sec5.json"}) {
    const auto L = load(name);
    const auto& s = L.setup;
    const auto cfg = ex::resolve_augmented(s, L.cfg.solvers[0]);
    CertificateOptions opt;
    opt.samples = 1000;
    opt.tol = 1e-6;
    opt.seed = 77;
    const bool at_ne = ne_certificate(s.game, s.mixing, cfg, L.X_star, opt).ok();

    Matrix split = L.X_star;
    split(0, 1) += 1e-2;
    const bool split_rejected = !ne_certificate(s.game, s.mixing, cfg, split, opt).ok();

    // Move one interior coordinate in every row: consensual but not an equilibrium.
    Matrix shifted = L.X_star;
    const auto& box = s.game.boxes()[0];
    const double delta = shifted(0, 0) + 1e-2 <= box.hi ? 1e-2 : -1e-2;
    shifted.col(0).array() += delta;
    const bool shift_rejected = !ne_certificate(s.game, s.mixing, cfg, shifted, opt).ok();

    ok = ok && at_ne && split_rejected && shift_rejected;
    detail << L.cfg.name << ": NE " << (at_ne ? "accepted" : "REJECTED") << ", non-consensual "
           << (split_rejected ? "rejected" : "ACCEPTED") << ", shifted " << (shift_rejected ? "rejected" : "ACCEPTED")
           << "; ";
  }
  std::string d = detail.str();
  return {ok, d.substr(0, d.size() - 2)};
}

Outcome criterion8() {
  Clock clock;
  const auto cfg = ex::load_config(kConfigs / "paper_sec5.json");
  const auto dir = fs::temp_directory_path() / "grane_acceptance_sec5";
  fs::remove_all(dir);
  const auto art = ex::run_experiment(cfg, dir);
  const double seconds = clock.seconds();
  const ConvergenceTrace* grane = nullptr;
  const ConvergenceTrace* acc = nullptr;
  const ConvergenceTrace* restricted = nullptr;
  for (std::size_t i = 0; i < cfg.solvers.size(); ++i) {
    const auto& e = cfg.solvers[i];
    if (e.solver.algorithm == Algorithm::acc_grane) acc = &art.traces[i];
    else if (e.path == MonotonicityPath::restricted) restricted = &art.traces[i];
    else grane = &art.traces[i];
  }
  if (!grane || !acc || !restricted) return {false, "config lacks a grane, acc-grane or restricted run"};

  auto non_increasing = [](const ConvergenceTrace& t) {
    for (std::size_t k = 1; k < t.records.size(); ++k) {
      if (t.records[k].normalized_residual > t.records[k - 1].normalized_residual) return false;
    }
    return true;
  };
  const double g_first = grane->records.front().normalized_residual;
  const double g_last = grane->records.back().normalized_residual;
  const double a_last = acc->records.back().normalized_residual;
  const bool grane_decreases = non_increasing(*grane) && g_last < g_first;
  const bool grane_slow = g_last > 1e-2 && g_last > a_last;

  // Continued decrease: strictly lower residual at every 1000-iteration mark.
  bool blocks = non_increasing(*restricted);
  double prev = std::numeric_limits<double>::infinity();
  std::size_t marks = 0;
  for (const auto& r : restricted->records) {
    if (r.k % 1000 != 0) continue;
    blocks = blocks && r.fro_residual < prev;
    prev = r.fro_residual;
    ++marks;
  }
  const std::size_t last_k = restricted->records.back().k;
  const bool ok = grane_decreases && grane_slow && blocks && marks == 11 && last_k >= 10000 && seconds < 60.0;
  return {ok, fmt("grane residual %.4g -> %.4g (acc %.3g), restricted run %.17g -> %.17g over %zu iterations, "
                  "%.2f s",
                  g_first, g_last, a_last, restricted->records.front().fro_residual,
                  restricted->records.back().fro_residual, last_k, seconds)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"oracle equivalence on g2", criterion1},
      {"geometric rate on g2", criterion2},
      {"acceleration", criterion3},
      {"restricted path on g2r", criterion4},
      {"constant certificates", criterion5},
      {"mixing-matrix suite", criterion6},
      {"equilibrium certificate", criterion7},
      {"twenty-player qualitative reproduction", criterion8},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed;
}
