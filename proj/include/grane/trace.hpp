#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace grane {

/// Residuals of one iterate against the reference equilibrium matrix.
struct TraceRecord {
  std::size_t k = 0;
  double fro_residual = 0.0;         // ||X - X_ref||_F
  double relative_error = 0.0;       // ||X - X_ref||_F^2 / ||X - X0||_F^2
  double normalized_residual = 0.0;  // ||X - X_ref||_F / ||X0 - X_ref||_F
  double consensus_gap = 0.0;        // max_{i,j} ||row_i - row_j||_2
  double vi_residual = 0.0;          // ||X - P(X - F_a(X))||_F
};

struct ConvergenceTrace {
  std::string label;
  std::uint64_t seed = 0;
  std::string config_snapshot;  // JSON text of the solver entry that produced the trace
  double wall_seconds = 0.0;
  std::vector<TraceRecord> records;

  /// First recorded k with normalized_residual <= threshold.
  std::optional<std::size_t> iterations_to(double threshold) const;
};

/// Header `k,fro_residual,relative_error,consensus_gap,vi_residual`, one row per
/// record, 17 significant digits.
void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);

/// Long-format plot data `solver,k,normalized_residual` for several traces.
void write_plot_csv(std::ostream& out, const std::vector<ConvergenceTrace>& traces);

/// printf("%.17g") with inf/nan spelled the way strtod reads them back.
std::string format_real(double v);

}  // namespace grane
