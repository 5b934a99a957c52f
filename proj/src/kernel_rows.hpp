#pragma once

#include <span>

#include "grane/game.hpp"

namespace grane::kernels::detail {

// One row of F_a. Shared by the serial and the OpenMP kernels so that both
// produce the same floating-point operation sequence.
inline void augmented_row(const Game& game, const Matrix& W, std::span<const double> alpha, const Matrix& X,
                          Eigen::Index i, double* out) {
  const Eigen::Index n = X.cols();
  const double* xi = X.row(i).data();
  for (Eigen::Index l = 0; l < n; ++l) out[l] = xi[l];
  for (Eigen::Index j = 0; j < n; ++j) {
    const double w = W(i, j);
    if (w == 0.0) continue;
    const double* xj = X.row(j).data();
    for (Eigen::Index l = 0; l < n; ++l) out[l] -= w * xj[l];
  }
  const auto ui = static_cast<std::size_t>(i);
  const double g = game.partial_gradient_unchecked(ui, std::span<const double>(xi, static_cast<std::size_t>(n)));
  out[i] += alpha[ui] * g;
}

inline void projected_row(const Game& game, const Matrix& W, std::span<const double> alpha, double step,
                          const Matrix& X, Eigen::Index i, double* out) {
  augmented_row(game, W, alpha, X, i, out);
  const Eigen::Index n = X.cols();
  const double* xi = X.row(i).data();
  for (Eigen::Index l = 0; l < n; ++l) out[l] = xi[l] - step * out[l];
  out[i] = game.boxes()[static_cast<std::size_t>(i)].clamp(out[i]);
}

inline void check_shapes(const Game& game, const Matrix& W, std::span<const double> alpha, const Matrix& X) {
  const auto n = static_cast<Eigen::Index>(game.players());
  if (X.rows() != n || X.cols() != n || W.rows() != n || W.cols() != n ||
      alpha.size() != game.players()) {
    throw InvalidArgument("augmented mapping: dimension mismatch");
  }
}

}  // namespace grane::kernels::detail
