#pragma once

#include <span>

#include "grane/game.hpp"

// Inner loops of the estimation-matrix algorithms. Every kernel has a serial
// reference and an OpenMP version that splits work by rows. Both evaluate each
// output entry with the same operation order, so their results are bit-identical.
namespace grane::kernels {

enum class Backend { serial, parallel };

/// out = (I - W) X + Diag(alpha_i * grad_i J_i(row_i(X)))
void augmented_map_serial(const Game& game, const Matrix& W, std::span<const double> alpha, const Matrix& X,
                          Matrix& out);
void augmented_map_parallel(const Game& game, const Matrix& W, std::span<const double> alpha, const Matrix& X,
                            Matrix& out);

/// out = P_{Omega_a}(X - step * F_a(X)); only the diagonal is clamped.
void projected_step_serial(const Game& game, const Matrix& W, std::span<const double> alpha, double step,
                           const Matrix& X, Matrix& out);
void projected_step_parallel(const Game& game, const Matrix& W, std::span<const double> alpha, double step,
                             const Matrix& X, Matrix& out);

inline void augmented_map(Backend backend, const Game& game, const Matrix& W, std::span<const double> alpha,
                          const Matrix& X, Matrix& out) {
  if (backend == Backend::parallel) {
    augmented_map_parallel(game, W, alpha, X, out);
  } else {
    augmented_map_serial(game, W, alpha, X, out);
  }
}

inline void projected_step(Backend backend, const Game& game, const Matrix& W, std::span<const double> alpha,
                           double step, const Matrix& X, Matrix& out) {
  if (backend == Backend::parallel) {
    projected_step_parallel(game, W, alpha, step, X, out);
  } else {
    projected_step_serial(game, W, alpha, step, X, out);
  }
}

/// Row count at which the OpenMP kernels actually fork; below it they run on
/// the calling thread.
inline constexpr Eigen::Index kParallelRowThreshold = 48;

}  // namespace grane::kernels
