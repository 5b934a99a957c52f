#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "grane/augmented.hpp"
#include "grane/kernels.hpp"
#include "grane/trace.hpp"

namespace grane {

enum class Algorithm { grane, acc_grane, centralized };

std::string to_string(Algorithm a);

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::grane;
  std::optional<double> step;  // nullopt: mu / L_Fa^2 of the configured path
  std::size_t max_iters = 1000;
  double stop_tol = 0.0;  // stop once ||X^{k+1} - X^k||_F <= stop_tol (0 disables)
  std::size_t trace_stride = 1;
  kernels::Backend backend = kernels::Backend::parallel;
  // Divergence: step change grows by more than `divergence_factor` within
  // `divergence_window` iterations.
  std::size_t divergence_window = 100;
  double divergence_factor = 10.0;
};

struct SolverResult {
  Matrix X;  // final iterate (GRANE) or final averaged output (Acc-GRANE)
  ConvergenceTrace trace;
  std::size_t iterations = 0;
  bool converged = false;  // stop_tol reached before max_iters
  double step = 0.0;
};

/// Residuals of X against a reference matrix and the start point.
TraceRecord residual_metrics(const Matrix& X, const Matrix* X_ref, const Matrix& X0, const Game& game,
                             const MixingMatrix& m, std::span<const double> alpha);

/// Max pairwise Euclidean distance between rows.
double consensus_gap(const Matrix& X);

/// n x n matrix whose rows all equal x.
Matrix consensual_matrix(std::span<const double> x);

// --- GRANE ------------------------------------------------------------------

/// X^{k+1} = P_{Omega_a}(X^k - step F_a(X^k)). `reference` (usually the
/// replicated centralized equilibrium) feeds the residual columns of the trace;
/// without it those columns are NaN.
SolverResult grane_run(const Game& game, const MixingMatrix& m, const AugmentedConfig& cfg, const SolverConfig& sc,
                       const Matrix& X0, const Matrix* reference = nullptr);

/// One GRANE iteration written per player, the way each agent computes it from
/// its neighbours' rows:
///   x_i      <- P_i((1 - s + s w_ii) x_i + sum_{j in N_i} s w_ij x_(j)i - s alpha_i grad_i J_i(x_(i)))
///   x_(i)l   <- (1 - s + s w_ii) x_(i)l + sum_{j in N_i} s w_ij x_(j)l,   l != i
Matrix grane_rowwise_step(const Game& game, const MixingMatrix& m, std::span<const double> alpha, double step,
                          const Matrix& X);

// --- Acc-GRANE --------------------------------------------------------------

/// Weight schedule lambda^0 = 1, lambda^{k+1} = S^k / gamma, S^k = sum_{t<=k} lambda^t.
struct AccelerationWeights {
  std::vector<double> lambda;
  std::vector<double> S;
};
AccelerationWeights acceleration_weights(double gamma, std::size_t count);

/// State machine for the accelerated method:
///   X^k     = P(sum_t lambda^t [Y^t - F_a(Y^t)/mu] / S^k)
///   Y^{k+1} = P(X^k - F_a(X^k)/L)
///   output  Ytilde^k = sum_t lambda^t Y^t / S^k
/// The weighted sums are kept as running averages: since lambda^k / S^k equals
/// 1/(gamma + 1) for every k >= 1, the averages update in O(n^2) without ever
/// forming S^k, which grows like (1 + 1/gamma)^k and would overflow.
class AccGraneIterator {
 public:
  AccGraneIterator(const Game& game, const MixingMatrix& m, std::vector<double> alpha, double mu, double L,
                   double gamma, Matrix Y0, kernels::Backend backend = kernels::Backend::parallel);

  /// Consumes Y^k: forms X^k and the output Ytilde^k, then Y^{k+1}.
  void advance();

  std::size_t k() const { return k_; }  // index of the last consumed Y
  const Matrix& x() const { return X_; }
  const Matrix& y_next() const { return Y_; }
  const Matrix& output() const { return Ytilde_; }

 private:
  const Game& game_;
  const MixingMatrix& m_;
  std::vector<double> alpha_;
  double mu_;
  double L_;
  double gamma_;
  kernels::Backend backend_;
  Matrix Y_;       // Y^k before advance, Y^{k+1} after
  Matrix avg_y_;   // sum lambda^t Y^t / S^k
  Matrix avg_g_;   // sum lambda^t (Y^t - F_a(Y^t)/mu) / S^k
  Matrix X_;
  Matrix Ytilde_;
  Matrix scratch_;
  std::size_t k_ = 0;
  bool started_ = false;
};

/// Runs the accelerated method; needs cfg.mu_Fa. Records Ytilde^k for
/// k = 0..max_iters.
SolverResult acc_grane_run(const Game& game, const MixingMatrix& m, const AugmentedConfig& cfg,
                           const SolverConfig& sc, const Matrix& Y0, const Matrix* reference = nullptr);

// --- centralized oracle -----------------------------------------------------

struct CentralizedOptions {
  std::optional<double> step;  // default mu_F / (L_F^2 n), L_F = max_i sqrt(L_i^2 + L_{-i}^2)
  std::size_t max_iters = 20000;
  double tol = 1e-14;  // stop once ||x^{k+1} - x^k||_2 <= tol
  std::size_t divergence_window = 100;
  double divergence_factor = 10.0;
  std::function<void(std::size_t, const Vector&)> observer;  // called with (k, x^k) for k >= 1
};

struct CentralizedResult {
  Vector x;
  std::size_t iterations = 0;
  bool converged = false;
  double step = 0.0;
};

/// Projected gradient play x^{k+1} = P_Omega(x^k - step F(x^k)).
CentralizedResult centralized_gradient_play(const Game& game, const CentralizedOptions& options,
                                            std::span<const double> x0);

}  // namespace grane
