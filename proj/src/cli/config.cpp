#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <CLI11.hpp>

#include "chiral/cli.hpp"

namespace chiral::cli {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void validate(const RunConfig& config) {
  if (!(config.lambda_step > 0.0)) throw std::invalid_argument("lambda-step must be positive");
  if (!std::isfinite(config.lambda_min) || !std::isfinite(config.lambda_max)) {
    throw std::invalid_argument("lambda bounds must be finite");
  }
  if (config.lambda_min > config.lambda_max) {
    throw std::invalid_argument("lambda-min exceeds lambda-max");
  }
  if (config.k < 1) throw std::invalid_argument("k must be at least 1");
  if (!(config.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (config.workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (config.restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  const bool needs_geometry = !(config.command == "witness" && !config.state_file.empty());
  if (needs_geometry && config.geometry.empty()) throw std::invalid_argument("geometry is required");
}

std::vector<double> lambda_grid(const RunConfig& config) {
  validate(config);
  const double span = (config.lambda_max - config.lambda_min) / config.lambda_step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = config.lambda_min + static_cast<double>(i) * config.lambda_step;
  }
  return grid;
}

RunConfig parse_command_line(int argc, const char* const* argv, std::string* help_text) {
  RunConfig cfg;
  CLI::App app{"Exact diagonalization and mean-field tools for Heisenberg-plus-chiral spin models",
               "chiral_ed"};
  app.set_config("--config", "", "flat key=value file; keys are the long flag names");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--geometry", cfg.geometry,
                 "ladder-a:N[:open], ladder-b:N[:open], ladder-c:N, ring:N, torus:RxC");
  app.add_option("--lambda-min", cfg.lambda_min);
  app.add_option("--lambda-max", cfg.lambda_max, "defaults to lambda-min");
  app.add_option("--lambda-step", cfg.lambda_step);
  app.add_option("--k", cfg.k, "eigenpairs per sector");
  app.add_option("--tol", cfg.tol, "relative eigenpair residual");
  app.add_option("--out", cfg.out, "CSV path; stdout when absent");
  app.add_option("--seed", cfg.seed);
  app.add_option("--workers", cfg.workers, "lambda points solved concurrently");
  app.add_option("--reference", cfg.reference, "site:I | bond:I,J | plaquette:I,J,K");
  app.add_option("--triple", cfg.triple, "I,J,K; every plaquette when absent");
  app.add_option("--state-file", cfg.state_file, "8 or 64 lines of `re im`");
  app.add_option("--ed-sizes", cfg.ed_sizes, "type-A sizes for exact energies")->delimiter(',');
  app.add_option("--restarts", cfg.restarts, "witness optimizer starts");

  for (const char* name : {"spectrum", "sweep", "correlations", "witness", "meanfield"}) {
    app.add_subcommand(name)->callback([&cfg, name] { cfg.command = name; });
  }
  app.get_subcommand("spectrum")->description("ground energy, degeneracy, gap and quantum numbers");
  app.get_subcommand("sweep")->description("mean chirality over a lambda grid");
  app.get_subcommand("correlations")->description("connected correlators from a reference");
  app.get_subcommand("witness")->description("chirality entanglement witness on triples");
  app.get_subcommand("meanfield")->description("type-A mean-field energy and order parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    if (help_text) *help_text = app.help();
    return RunConfig{};
  } catch (const CLI::ParseError& e) {
    throw std::invalid_argument(e.what());
  }
  if (app.count("--lambda-max") == 0) cfg.lambda_max = cfg.lambda_min;
  validate(cfg);
  return cfg;
}

}  // namespace chiral::cli
