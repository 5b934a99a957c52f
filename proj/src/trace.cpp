#include "grane/trace.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace grane {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<std::size_t> ConvergenceTrace::iterations_to(double threshold) const {
  for (const auto& r : records) {
    if (r.normalized_residual <= threshold) return r.k;
  }
  return std::nullopt;
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
  out << "k,fro_residual,relative_error,consensus_gap,vi_residual\n";
  for (const auto& r : trace.records) {
    out << r.k << ',' << format_real(r.fro_residual) << ',' << format_real(r.relative_error) << ','
        << format_real(r.consensus_gap) << ',' << format_real(r.vi_residual) << '\n';
  }
}

void write_plot_csv(std::ostream& out, const std::vector<ConvergenceTrace>& traces) {
  out << "solver,k,normalized_residual\n";
  for (const auto& t : traces) {
    for (const auto& r : t.records) out << t.label << ',' << r.k << ',' << format_real(r.normalized_residual) << '\n';
  }
}

}  // namespace grane
