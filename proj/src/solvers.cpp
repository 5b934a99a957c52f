#include "grane/solvers.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace grane {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Flags a run whose step change grew by `factor` over `window` iterations.
class DivergenceGuard {
 public:
  DivergenceGuard(std::size_t window, double factor) : window_(window), factor_(factor) {}

  void observe(std::size_t k, double change, double scale) {
    if (!std::isfinite(change) || !std::isfinite(scale)) {
      std::ostringstream msg;
      msg << "iterate became non-finite at k=" << k;
      throw DivergenceError(msg.str());
    }
    history_.push_back(change);
    if (history_.size() > window_ + 1) history_.pop_front();
    if (window_ > 0 && history_.size() == window_ + 1) {
      const double past = history_.front();
      // Absolute floor so that round-off wobble after convergence is ignored.
      const double floor = 1e-12 * (1.0 + scale);
      if (change > factor_ * past + floor) {
        std::ostringstream msg;
        msg << "divergence detected at k=" << k << ": step change " << change << " vs " << past << " "
            << window_ << " iterations earlier";
        throw DivergenceError(msg.str());
      }
    }
  }

 private:
  std::size_t window_;
  double factor_;
  std::deque<double> history_;
};

double resolve_step(const AugmentedConfig& cfg, const SolverConfig& sc) {
  if (sc.step) {
    if (!(*sc.step > 0.0) || !std::isfinite(*sc.step)) throw InvalidArgument("solver step must be > 0");
    return *sc.step;
  }
  if (cfg.path == MonotonicityPath::strong && !cfg.mu_Fa) throw MissingConstant("auto step needs mu_Fa");
  if (cfg.path == MonotonicityPath::restricted && !cfg.mu_r_Fa) throw MissingConstant("auto step needs mu_r_Fa");
  return cfg.auto_step();
}

void check_start(const Game& game, const Matrix& X0) {
  const auto n = static_cast<Eigen::Index>(game.players());
  if (X0.rows() != n || X0.cols() != n) throw InvalidArgument("initial matrix must be n x n");
  if (!X0.allFinite()) throw InvalidArgument("initial matrix must be finite");
  if (!in_Omega_a(game.boxes(), X0)) throw InvalidArgument("initial matrix is not in Omega_a (diagonal outside boxes)");
}

bool should_record(std::size_t k, std::size_t stride) { return stride <= 1 || k % stride == 0; }

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::grane:
      return "grane";
    case Algorithm::acc_grane:
      return "acc-grane";
    case Algorithm::centralized:
      return "centralized";
  }
  return "unknown";
}

double consensus_gap(const Matrix& X) {
  double gap = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < X.rows(); ++j) gap = std::max(gap, (X.row(i) - X.row(j)).norm());
  }
  return gap;
}

Matrix consensual_matrix(std::span<const double> x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Matrix X(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) X(i, j) = x[static_cast<std::size_t>(j)];
  }
  return X;
}

TraceRecord residual_metrics(const Matrix& X, const Matrix* X_ref, const Matrix& X0, const Game& game,
                             const MixingMatrix& m, std::span<const double> alpha) {
  TraceRecord r;
  if (X_ref) {
    if (X_ref->rows() != X.rows() || X_ref->cols() != X.cols()) throw InvalidArgument("residual_metrics: shape mismatch");
    const double num = (X - *X_ref).squaredNorm();
    const double den = (X - X0).squaredNorm();
    r.fro_residual = std::sqrt(num);
    if (den > 0.0) {
      r.relative_error = num / den;
    } else {
      r.relative_error = num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    const double start = (X0 - *X_ref).norm();
    if (start > 0.0) {
      r.normalized_residual = r.fro_residual / start;
    } else {
      r.normalized_residual = r.fro_residual > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
  } else {
    r.fro_residual = r.relative_error = r.normalized_residual = kNaN;
  }
  r.consensus_gap = consensus_gap(X);
  const Matrix F = eval_F_a(game, m, alpha, X);
  const Matrix P = project_Omega_a(game.boxes(), X - F);
  r.vi_residual = (X - P).norm();
  return r;
}

// ---------------------------------------------------------------------------

SolverResult grane_run(const Game& game, const MixingMatrix& m, const AugmentedConfig& cfg, const SolverConfig& sc,
                       const Matrix& X0, const Matrix* reference) {
  check_start(game, X0);
  const auto t0 = std::chrono::steady_clock::now();
  SolverResult out;
  out.step = resolve_step(cfg, sc);
  out.trace.label = to_string(Algorithm::grane);

  DivergenceGuard guard(sc.divergence_window, sc.divergence_factor);
  Matrix X = X0;
  Matrix next(X0.rows(), X0.cols());
  auto record = [&](std::size_t k) {
    auto r = residual_metrics(X, reference, X0, game, m, cfg.alpha);
    r.k = k;
    out.trace.records.push_back(r);
  };
  record(0);
  std::size_t k = 0;
  while (k < sc.max_iters) {
    kernels::projected_step(sc.backend, game, m.W, cfg.alpha, out.step, X, next);
    const double change = (next - X).norm();
    X.swap(next);
    ++k;
    guard.observe(k, change, X.norm());
    const bool done = sc.stop_tol > 0.0 && change <= sc.stop_tol;
    if (should_record(k, sc.trace_stride) || done || k == sc.max_iters) record(k);
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.iterations = k;
  out.X = std::move(X);
  out.trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Matrix grane_rowwise_step(const Game& game, const MixingMatrix& m, std::span<const double> alpha, double step,
                          const Matrix& X) {
  const auto n = static_cast<Eigen::Index>(game.players());
  if (X.rows() != n || X.cols() != n || alpha.size() != game.players()) {
    throw InvalidArgument("grane_rowwise_step: dimension mismatch");
  }
  std::vector<std::vector<Eigen::Index>> neighbours(static_cast<std::size_t>(n));
  for (const auto& [i, j] : m.graph.edges()) {
    neighbours[i].push_back(static_cast<Eigen::Index>(j));
    neighbours[j].push_back(static_cast<Eigen::Index>(i));
  }
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double keep = 1.0 - step + step * m.W(i, i);
    for (Eigen::Index l = 0; l < n; ++l) {
      double v = keep * X(i, l);
      for (Eigen::Index j : neighbours[ui]) v += step * m.W(i, j) * X(j, l);
      out(i, l) = v;
    }
    const double g = game.partial_gradient(ui, std::span<const double>(X.row(i).data(), static_cast<std::size_t>(n)));
    out(i, i) = game.boxes()[ui].clamp(out(i, i) - step * alpha[ui] * g);
  }
  return out;
}

// ---------------------------------------------------------------------------

AccelerationWeights acceleration_weights(double gamma, std::size_t count) {
  if (!(gamma > 0.0)) throw InvalidArgument("acceleration_weights: gamma must be > 0");
  AccelerationWeights w;
  double lambda = 1.0;
  double S = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    S += lambda;
    w.lambda.push_back(lambda);
    w.S.push_back(S);
    lambda = S / gamma;
  }
  return w;
}

AccGraneIterator::AccGraneIterator(const Game& game, const MixingMatrix& m, std::vector<double> alpha, double mu,
                                   double L, double gamma, Matrix Y0, kernels::Backend backend)
    : game_(game), m_(m), alpha_(std::move(alpha)), mu_(mu), L_(L), gamma_(gamma), backend_(backend), Y_(std::move(Y0)) {
  if (!(mu_ > 0.0) || !(L_ > 0.0) || !(gamma_ > 0.0)) throw InvalidArgument("accelerated method needs mu, L, gamma > 0");
  check_start(game_, Y_);
}

void AccGraneIterator::advance() {
  if (started_) ++k_;
  // lambda^k / S^k: 1 for k = 0, then (S^{k-1}/gamma) / (S^{k-1}(1 + 1/gamma)).
  const double w = started_ ? 1.0 / (gamma_ + 1.0) : 1.0;
  kernels::augmented_map(backend_, game_, m_.W, alpha_, Y_, scratch_);
  if (!started_) {
    avg_y_ = Y_;
    avg_g_ = Y_ - scratch_ / mu_;
    started_ = true;
  } else {
    avg_y_ = (1.0 - w) * avg_y_ + w * Y_;
    avg_g_ = (1.0 - w) * avg_g_ + w * (Y_ - scratch_ / mu_);
  }
  X_ = project_Omega_a(game_.boxes(), avg_g_);
  Ytilde_ = avg_y_;
  kernels::projected_step(backend_, game_, m_.W, alpha_, 1.0 / L_, X_, Y_);
}

SolverResult acc_grane_run(const Game& game, const MixingMatrix& m, const AugmentedConfig& cfg,
                           const SolverConfig& sc, const Matrix& Y0, const Matrix* reference) {
  if (!cfg.mu_Fa) {
    throw MissingConstant("accelerated method needs the strong monotonicity constant mu_Fa; use GRANE on the restricted path");
  }
  check_start(game, Y0);
  const auto t0 = std::chrono::steady_clock::now();
  const double gamma = cfg.L_Fa / *cfg.mu_Fa;
  SolverResult out;
  out.step = 1.0 / cfg.L_Fa;
  out.trace.label = to_string(Algorithm::acc_grane);

  AccGraneIterator it(game, m, cfg.alpha, *cfg.mu_Fa, cfg.L_Fa, gamma, Y0, sc.backend);
  DivergenceGuard guard(sc.divergence_window, sc.divergence_factor);
  auto record = [&](std::size_t k) {
    auto r = residual_metrics(it.output(), reference, Y0, game, m, cfg.alpha);
    r.k = k;
    out.trace.records.push_back(r);
  };
  it.advance();  // k = 0, output = Y0
  record(0);
  Matrix previous = it.output();
  std::size_t k = 0;
  while (k < sc.max_iters) {
    it.advance();
    ++k;
    const double change = (it.output() - previous).norm();
    guard.observe(k, change, it.output().norm());
    previous = it.output();
    const bool done = sc.stop_tol > 0.0 && change <= sc.stop_tol;
    if (should_record(k, sc.trace_stride) || done || k == sc.max_iters) record(k);
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.iterations = k;
  out.X = it.output();
  out.trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// ---------------------------------------------------------------------------

CentralizedResult centralized_gradient_play(const Game& game, const CentralizedOptions& options,
                                            std::span<const double> x0) {
  const auto n = game.players();
  if (x0.size() != n) throw InvalidArgument("centralized_gradient_play: x0 has wrong length");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x0[i]) || !game.boxes()[i].contains(x0[i])) {
      throw InvalidArgument("centralized_gradient_play: x0 is not in the action set");
    }
  }
  CentralizedResult out;
  if (options.step) {
    out.step = *options.step;
  } else {
    const auto& k = game.constants();
    const double L = k.joint_lipschitz();
    if (!(k.mu_F > 0.0) || !(L > 0.0)) {
      throw MissingConstant("centralized auto step needs mu_F > 0; supply an explicit step");
    }
    out.step = k.mu_F / (L * L * static_cast<double>(n));
  }
  if (!(out.step > 0.0)) throw InvalidArgument("centralized step must be > 0");

  DivergenceGuard guard(options.divergence_window, options.divergence_factor);
  Vector x = Eigen::Map<const Vector>(x0.data(), static_cast<Eigen::Index>(n));
  Vector next(x.size());
  const auto& boxes = game.boxes();
  std::size_t k = 0;
  while (k < options.max_iters) {
    const std::span<const double> xs(x.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      next[ii] = boxes[i].clamp(x[ii] - out.step * game.partial_gradient_unchecked(i, xs));
    }
    const double change = (next - x).norm();
    x.swap(next);
    ++k;
    guard.observe(k, change, x.norm());
    if (options.observer) options.observer(k, x);
    if (change <= options.tol) {
      out.converged = true;
      break;
    }
  }
  out.iterations = k;
  out.x = std::move(x);
  return out;
}

}  // namespace grane
