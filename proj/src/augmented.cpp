#include "grane/augmented.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace grane {

namespace {

bool uniform_alpha(std::span<const double> alpha) {
  return !alpha.empty() && std::all_of(alpha.begin(), alpha.end(), [&](double a) { return a == alpha[0]; });
}

void check_alpha(std::span<const double> alpha, std::size_t n) {
  if (alpha.size() != n) throw InvalidArgument("alpha must have one entry per player");
  for (double a : alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("alpha entries must be finite and > 0");
  }
}

}  // namespace

std::string to_string(MonotonicityPath path) {
  return path == MonotonicityPath::strong ? "strong" : "restricted";
}

Vector eval_tilde_F(const Game& game, const Matrix& X) {
  const auto n = static_cast<Eigen::Index>(game.players());
  if (X.rows() != n || X.cols() != n) throw InvalidArgument("eval_tilde_F: X must be n x n");
  if (!X.allFinite()) throw InvalidArgument("eval_tilde_F: non-finite input");
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = game.partial_gradient_unchecked(static_cast<std::size_t>(i),
                                             std::span<const double>(X.row(i).data(), static_cast<std::size_t>(n)));
  }
  return out;
}

Matrix eval_F_a(const Game& game, const MixingMatrix& m, std::span<const double> alpha, const Matrix& X,
                kernels::Backend backend) {
  Matrix out;
  kernels::augmented_map(backend, game, m.W, alpha, X, out);
  return out;
}

Matrix project_Omega_a(std::span<const Box> boxes, Matrix X) {
  if (X.rows() != X.cols() || static_cast<std::size_t>(X.rows()) != boxes.size()) {
    throw InvalidArgument("project_Omega_a: dimension mismatch");
  }
  for (Eigen::Index i = 0; i < X.rows(); ++i) X(i, i) = boxes[static_cast<std::size_t>(i)].clamp(X(i, i));
  return X;
}

bool in_Omega_a(std::span<const Box> boxes, const Matrix& X) {
  if (X.rows() != X.cols() || static_cast<std::size_t>(X.rows()) != boxes.size()) return false;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (!boxes[static_cast<std::size_t>(i)].contains(X(i, i))) return false;
  }
  return true;
}

Matrix consensual_part(const Matrix& X) {
  const Eigen::RowVectorXd mean = X.colwise().mean();
  return mean.replicate(X.rows(), 1);
}

double fro_inner(const Matrix& A, const Matrix& B) { return A.cwiseProduct(B).sum(); }

double lipschitz_Fa(const GameConstants& k, const MixingMatrix& m, std::span<const double> alpha) {
  if (alpha.size() != k.L_own.size()) throw InvalidArgument("lipschitz_Fa: alpha length mismatch");
  double scaled = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    scaled = std::max(scaled, alpha[i] * std::hypot(k.L_own[i], k.L_other[i]));
  }
  return scaled + m.sigma_max_IW;
}

StrongMonotonicityTerms strong_mono_terms(const GameConstants& k, const MixingMatrix& m,
                                          std::span<const double> alpha) {
  const std::size_t n = alpha.size();
  if (k.L_other.size() != n) throw InvalidArgument("strong_mono_terms: alpha length mismatch");
  const double root = std::sqrt(static_cast<double>(n) - 1.0);
  double worst = 0.0;
  double a2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, alpha[i] * (std::hypot(k.mu_F, k.L_other[i]) - k.mu_F));
    a2 = std::min(a2, alpha[i] / static_cast<double>(n) * (k.mu_F - k.L_other[i] * root));
  }
  return {m.lambda_min_nz_IW - 0.5 * worst, a2};
}

std::optional<double> strong_mono_Fa(const GameConstants& k, const MixingMatrix& m, std::span<const double> alpha) {
  if (!(k.mu_F > 0.0)) return std::nullopt;
  const auto t = strong_mono_terms(k, m, alpha);
  if (t.a1 > 0.0 && t.a2 > 0.0) return std::min(t.a1, t.a2);
  return std::nullopt;
}

double restricted_default_beta(const GameConstants& k, std::size_t n) {
  const double L_F = k.joint_lipschitz();
  if (!(k.mu_r > 0.0)) throw InvalidArgument("restricted path needs mu_r > 0");
  if (!(L_F > 0.0)) throw InvalidArgument("restricted path needs a positive Lipschitz constant");
  const double rhs = k.mu_r / (2.0 * static_cast<double>(n) * L_F);
  // beta^2 + 2 beta - rhs = 0; rhs / (1 + sqrt(1 + rhs)) is the cancellation-free
  // form of -1 + sqrt(1 + rhs).
  return rhs / (1.0 + std::sqrt(1.0 + rhs));
}

RestrictedSetting restricted_constant(const GameConstants& k, const MixingMatrix& m, double alpha, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("restricted constant: beta must be > 0");
  if (!(alpha > 0.0)) throw InvalidArgument("restricted constant: alpha must be > 0");
  const double n = static_cast<double>(k.L_own.size());
  const double gap = m.lambda_min_nz_IW;
  RestrictedSetting s;
  s.alpha = alpha;
  s.beta = beta;
  s.L_F = k.joint_lipschitz();
  s.b1 = std::min(alpha * (k.mu_r / n - s.L_F * (beta * beta + 2.0 * beta)), gap);
  s.b2 = gap / (1.0 + 1.0 / (beta * beta)) - alpha * s.L_F;
  s.mu_r_Fa = std::min(s.b1, s.b2);
  return s;
}

RestrictedSetting restricted_mono_Fa(const GameConstants& k, const MixingMatrix& m,
                                     std::optional<double> beta_override) {
  const std::size_t n = k.L_own.size();
  const double beta = beta_override ? *beta_override : restricted_default_beta(k, n);
  if (!(k.mu_r > 0.0)) throw InvalidArgument("restricted path needs mu_r > 0");
  const double L_F = k.joint_lipschitz();
  if (!(L_F > 0.0)) throw InvalidArgument("restricted path needs a positive Lipschitz constant");
  const double alpha = m.lambda_min_nz_IW / (2.0 * L_F * (1.0 + 1.0 / (beta * beta)));
  return restricted_constant(k, m, alpha, beta);
}

AugmentedConfig make_augmented_config(const GameConstants& k, const MixingMatrix& m, const AlphaPolicy& policy,
                                      MonotonicityPath path, std::optional<double> beta) {
  const std::size_t n = k.L_own.size();
  if (m.graph.nodes() != n) throw InvalidArgument("mixing matrix and game sizes differ");
  AugmentedConfig cfg;
  cfg.path = path;
  std::optional<RestrictedSetting> restricted;
  switch (policy.kind) {
    case AlphaPolicy::Kind::explicit_values:
      cfg.alpha = policy.values;
      break;
    case AlphaPolicy::Kind::uniform:
      cfg.alpha.assign(n, policy.value);
      break;
    case AlphaPolicy::Kind::restricted_auto:
      restricted = restricted_mono_Fa(k, m, beta);
      cfg.alpha.assign(n, restricted->alpha);
      break;
  }
  check_alpha(cfg.alpha, n);

  cfg.L_Fa = lipschitz_Fa(k, m, cfg.alpha);
  cfg.mu_Fa = strong_mono_Fa(k, m, cfg.alpha);
  if (!restricted && k.mu_r > 0.0 && uniform_alpha(cfg.alpha) && k.joint_lipschitz() > 0.0) {
    const double b = beta ? *beta : restricted_default_beta(k, n);
    restricted = restricted_constant(k, m, cfg.alpha[0], b);
  }
  if (restricted && restricted->mu_r_Fa > 0.0) {
    cfg.mu_r_Fa = restricted->mu_r_Fa;
    cfg.beta = restricted->beta;
  }

  if (path == MonotonicityPath::strong) {
    if (!cfg.mu_Fa) {
      const auto t = strong_mono_terms(k, m, cfg.alpha);
      std::ostringstream msg;
      msg << "mu_Fa undefined (a1=" << t.a1 << ", a2=" << t.a2 << ", mu_F=" << k.mu_F
          << "); use the lemma3 (restricted) path";
      throw MissingConstant(msg.str());
    }
    cfg.gamma = cfg.L_Fa / *cfg.mu_Fa;
  } else {
    if (!uniform_alpha(cfg.alpha)) throw InvalidArgument("restricted path requires a uniform alpha");
    if (!cfg.mu_r_Fa) {
      std::ostringstream msg;
      msg << "mu_r_Fa undefined for alpha=" << cfg.alpha[0];
      if (restricted) msg << " (b1=" << restricted->b1 << ", b2=" << restricted->b2 << ")";
      msg << "; mu_r=" << k.mu_r;
      throw MissingConstant(msg.str());
    }
    cfg.gamma = cfg.L_Fa / *cfg.mu_r_Fa;
  }
  return cfg;
}

ConditionReport condition_numbers(const AugmentedConfig& cfg, const GameConstants& k, const MixingMatrix& m) {
  const auto n = static_cast<double>(cfg.alpha.size());
  if (cfg.path == MonotonicityPath::strong && !cfg.mu_Fa) throw MissingConstant("condition_numbers: mu_Fa missing");
  if (cfg.path == MonotonicityPath::restricted && !cfg.mu_r_Fa) {
    throw MissingConstant("condition_numbers: mu_r_Fa missing");
  }
  ConditionReport r;
  r.gamma = cfg.L_Fa / cfg.modulus();
  r.H = k.max_other();
  if (!(k.mu_F > 0.0) || n < 2 || !(m.lambda_min_nz_IW > 0.0)) return r;

  const double gap = m.lambda_min_nz_IW;
  r.C = 16.0 * (n - 1.0) * gap / k.mu_F;
  r.alpha_recommended = *r.C / 9.0;
  r.small_coupling = r.H <= 0.5 * k.mu_F / std::sqrt(n - 1.0);
  r.alpha_is_recommended = uniform_alpha(cfg.alpha) &&
                           std::abs(cfg.alpha[0] - *r.alpha_recommended) <= 1e-12 * *r.alpha_recommended;

  const std::vector<double> rec(cfg.alpha.size(), *r.alpha_recommended);
  if (const auto mu = strong_mono_Fa(k, m, rec)) r.gamma_at_recommended = lipschitz_Fa(k, m, rec) / *mu;

  const double functional = 2.0 * n * k.joint_lipschitz() / k.mu_F;
  const double graph = m.lambda_max_IW / gap;
  r.bound = functional + 9.0 / 8.0 * graph;
  r.bound_corrected = functional + 9.0 / 8.0 * n / (n - 1.0) * graph;
  if (r.small_coupling && r.gamma_at_recommended) {
    r.bound_holds = *r.gamma_at_recommended <= *r.bound * (1.0 + 1e-12);
    r.bound_corrected_holds = *r.gamma_at_recommended <= *r.bound_corrected * (1.0 + 1e-12);
  }
  return r;
}

CertificateReport ne_certificate(const Game& game, const MixingMatrix& m, const AugmentedConfig& cfg,
                                 const Matrix& X_star, const CertificateOptions& options) {
  const auto n = static_cast<Eigen::Index>(game.players());
  const auto& boxes = game.boxes();
  if (X_star.rows() != n || X_star.cols() != n) throw InvalidArgument("ne_certificate: X* must be n x n");
  if (!X_star.allFinite()) throw InvalidArgument("ne_certificate: non-finite X*");
  if (!in_Omega_a(boxes, X_star)) throw InvalidArgument("ne_certificate: X* is not in Omega_a");

  CertificateReport r;
  const double tol = options.tol;

  // (a) consensus
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      r.consensus_gap = std::max(r.consensus_gap, (X_star.row(i) - X_star.row(j)).norm());
    }
  }
  r.consensus = r.consensus_gap <= tol;
  if (!r.consensus) r.issues.push_back("rows of X* disagree");

  // (b) sampled variational inequality
  const Matrix G = eval_F_a(game, m, cfg.alpha, X_star);
  Sampler rng(options.seed);
  const double radius = options.radius;
  auto side = [&](double v, double fallback) { return std::isfinite(v) ? v : fallback; };
  r.worst_vi_value = std::numeric_limits<double>::infinity();
  Matrix X(n, n);
  for (std::size_t s = 0; s < options.samples; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) {
          const Box& box = boxes[static_cast<std::size_t>(i)];
          X(i, i) = rng.uniform(side(box.lo, X_star(i, i) - radius), side(box.hi, X_star(i, i) + radius));
        } else {
          X(i, j) = X_star(i, j) + rng.uniform(-radius, radius);
        }
      }
    }
    r.worst_vi_value = std::min(r.worst_vi_value, fro_inner(G, X - X_star));
  }
  if (options.samples == 0) r.worst_vi_value = 0.0;
  r.variational_inequality = r.worst_vi_value >= -tol;
  if (!r.variational_inequality) r.issues.push_back("variational inequality violated on a sample");

  // (c) per-player stationarity at the box extremes; linear in x_i, so the
  // extremes are the binding points.
  const Vector x = X_star.diagonal();
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(n));
  r.worst_stationarity_value = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double g = game.partial_gradient(ui, xs);
    const Box& box = boxes[ui];
    for (double e : {side(box.lo, x[i] - radius), side(box.hi, x[i] + radius)}) {
      r.worst_stationarity_value = std::min(r.worst_stationarity_value, g * (e - x[i]));
    }
  }
  r.stationarity = r.worst_stationarity_value >= -tol;
  if (!r.stationarity) r.issues.push_back("a player can improve by moving inside its box");
  return r;
}

}  // namespace grane
