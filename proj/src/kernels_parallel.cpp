#include "grane/kernels.hpp"

#include "kernel_rows.hpp"

namespace grane::kernels {

void augmented_map_parallel(const Game& game, const Matrix& W, std::span<const double> alpha, const Matrix& X,
                            Matrix& out) {
  detail::check_shapes(game, W, alpha, X);
  out.resize(X.rows(), X.cols());
  const Eigen::Index n = X.rows();
#pragma omp parallel for schedule(static) if (n >= kParallelRowThreshold)
  for (Eigen::Index i = 0; i < n; ++i) detail::augmented_row(game, W, alpha, X, i, out.row(i).data());
}

void projected_step_parallel(const Game& game, const Matrix& W, std::span<const double> alpha, double step,
                             const Matrix& X, Matrix& out) {
  detail::check_shapes(game, W, alpha, X);
  out.resize(X.rows(), X.cols());
  const Eigen::Index n = X.rows();
#pragma omp parallel for schedule(static) if (n >= kParallelRowThreshold)
  for (Eigen::Index i = 0; i < n; ++i) detail::projected_row(game, W, alpha, step, X, i, out.row(i).data());
}

}  // namespace grane::kernels
