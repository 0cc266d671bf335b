#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chiral::cli {

struct RunConfig {
  std::string command;
  std::string geometry;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double lambda_step = 0.05;
  int k = 6;
  double tol = 1e-10;
  std::string out;  // empty: stdout
  std::uint64_t seed = 20080613;
  int workers = 1;
  /// correlations: `site:I`, `bond:I,J` or `plaquette:I,J,K`.
  std::string reference;
  /// witness: `I,J,K`, or empty for every plaquette of the lattice.
  std::string triple;
  /// witness: 8 (pure) or 64 (row-major density) lines of `re im`.
  std::string state_file;
  /// meanfield: even type-A sizes whose exact energies are appended.
  std::vector<int> ed_sizes;
  int restarts = 50;  // witness optimizer starts
};

/// Throws std::invalid_argument on inconsistent settings.
void validate(const RunConfig& config);

/// lambda_min, lambda_min + step, ... up to lambda_max (inclusive within 1e-9 step).
std::vector<double> lambda_grid(const RunConfig& config);

struct CommandOutput {
  std::string csv;
  bool ok = true;  // false when any row carries a failure status
};

CommandOutput cmd_spectrum(const RunConfig& config);
CommandOutput cmd_sweep(const RunConfig& config);
CommandOutput cmd_correlations(const RunConfig& config);
CommandOutput cmd_witness(const RunConfig& config);
CommandOutput cmd_meanfield(const RunConfig& config);

/// Dispatches on config.command.
CommandOutput run(const RunConfig& config);

/// Parses `argv` (subcommand, flags and an optional `--config FILE` of flat
/// key=value lines named like the long flags). Flags override the file.
/// Throws std::invalid_argument with the parser's message on bad input.
/// When help is requested the returned command is empty and the usage text
/// goes to `help_text`.
RunConfig parse_command_line(int argc, const char* const* argv, std::string* help_text = nullptr);

/// 12 significant digits, `nan`/`inf` spelled out.
std::string format_number(double value);

}  // namespace chiral::cli
