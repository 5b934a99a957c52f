#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "grane/augmented.hpp"
#include "grane/serialization.hpp"
#include "grane/solvers.hpp"

namespace grane::experiment {

/// Schema or semantic violation in an experiment config; exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kOk = 0, kInvalidConfig = 2, kDivergence = 3, kMissingConstant = 4 };

enum class MixingKind { lazy_laplacian, metropolis };

struct GraphSection {
  std::string type = "path";  // tree | path | complete | star | inline
  std::optional<std::uint64_t> seed;
  std::optional<Graph> inline_graph;
  MixingKind mixing = MixingKind::lazy_laplacian;
  std::optional<double> t;
};

struct SolverEntry {
  std::string label;
  SolverConfig solver;
  AlphaPolicy alpha;
  MonotonicityPath path = MonotonicityPath::strong;
  std::optional<double> beta;
};

struct OutputSection {
  std::string dir = ".";
  std::string trace_prefix = "trace_";
  std::string summary = "summary.json";
  std::string plot_data = "plot.csv";
};

struct ExperimentConfig {
  std::string name;
  std::variant<QuadraticFamily, QuadraticGame> game;
  GraphSection graph;
  std::vector<SolverEntry> solvers;
  CentralizedOptions reference;
  std::string initial = "zeros";  // zeros | box-center
  OutputSection output;
};

/// Parses and schema-checks a config. Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Game, graph, and mixing matrix built from a config.
struct Setup {
  QuadraticGame quadratic;
  Game game;
  MixingMatrix mixing;
};
Setup build_setup(const ExperimentConfig& cfg);

AugmentedConfig resolve_augmented(const Setup& setup, const SolverEntry& entry);

/// Initial estimation matrix in Omega_a.
Matrix initial_matrix(const ExperimentConfig& cfg, const Game& game);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
  bool clean() const { return errors.empty() && warnings.empty(); }
};

/// Schema check plus semantic checks: mixing-matrix validation and whether
/// every strong-path solver actually has mu_Fa.
ValidationReport validate_config(const std::filesystem::path& path);

/// Per-solver constants and condition report, without solving.
Json constants_summary(const ExperimentConfig& cfg);

struct RunArtifacts {
  Json summary;
  std::vector<ConvergenceTrace> traces;
  std::vector<std::filesystem::path> written;
};

/// Runs every solver entry (concurrently when more than one), then writes
/// the traces, the summary JSON, and the plot data into `output_dir`.
/// Output bytes depend only on the config.
RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& output_dir);

/// Output directory: $GRANE_OUTPUT_DIR when set, else the config's output.dir.
std::filesystem::path output_directory(const ExperimentConfig& cfg);

}  // namespace grane::experiment
