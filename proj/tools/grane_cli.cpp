#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

#include "grane/experiment.hpp"

namespace ex = grane::experiment;

namespace {

int run(const std::string& path, const std::string& out_override) {
  const auto cfg = ex::load_config(path);
  const auto dir = out_override.empty() ? ex::output_directory(cfg) : std::filesystem::path(out_override);
  const auto t0 = std::chrono::steady_clock::now();
  const auto art = ex::run_experiment(cfg, dir);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& s : art.summary["solvers"]) {
    const auto& fin = s["final"];
    std::printf("%-16s iters=%-8zu step=%-12.6g rel_err=%-12.6g vi=%-12.6g gap=%.6g\n",
                s["label"].get<std::string>().c_str(), s["iterations"].get<std::size_t>(), s["step"].get<double>(),
                fin["relative_error"].is_number() ? fin["relative_error"].get<double>() : -1.0,
                fin["vi_residual"].get<double>(), fin["consensus_gap"].get<double>());
  }
  for (const auto& p : art.written) std::printf("wrote %s\n", p.string().c_str());
  std::printf("wall time %.3f s\n", wall);
  return ex::kOk;
}

int validate(const std::string& path) {
  const auto report = ex::validate_config(path);
  for (const auto& e : report.errors) std::printf("error: %s\n", e.c_str());
  for (const auto& w : report.warnings) std::printf("warning: %s\n", w.c_str());
  if (!report.ok()) return ex::kInvalidConfig;
  std::printf("%s\n", report.clean() ? "ok" : "ok with warnings");
  return ex::kOk;
}

int constants(const std::string& path) {
  const auto cfg = ex::load_config(path);
  std::cout << ex::constants_summary(cfg).dump(2) << '\n';
  return ex::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed Nash equilibrium seeking on quadratic games"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  auto* run_cmd = app.add_subcommand("run", "Run every solver in a config and write traces and a summary");
  run_cmd->add_option("config", config, "Experiment config (JSON)")->required();
  run_cmd->add_option("-o,--output-dir", out_dir, "Override the output directory");
  auto* validate_cmd = app.add_subcommand("validate", "Check a config without solving");
  validate_cmd->add_option("config", config, "Experiment config (JSON)")->required();
  auto* constants_cmd = app.add_subcommand("constants", "Print the derived constants of a config");
  constants_cmd->add_option("config", config, "Experiment config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(config, out_dir);
    if (*validate_cmd) return validate(config);
    return constants(config);
  } catch (const ex::ConfigError& e) {
    std::fprintf(stderr, "invalid config: %s\n", e.what());
    return ex::kInvalidConfig;
  } catch (const grane::MissingConstant& e) {
    std::fprintf(stderr, "missing constant: %s\n", e.what());
    return ex::kMissingConstant;
  } catch (const grane::DivergenceError& e) {
    std::fprintf(stderr, "diverged: %s\n", e.what());
    return ex::kDivergence;
  } catch (const grane::InvalidArgument& e) {
    std::fprintf(stderr, "invalid config: %s\n", e.what());
    return ex::kInvalidConfig;
  }
}
