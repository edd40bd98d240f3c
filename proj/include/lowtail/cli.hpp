#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lowtail {

enum ExitCode : int {
  kExitOk = 0,
  kExitParameter = 1,
  kExitExhaustion = 2,
  kExitViolation = 3,
};

struct RunConfig {
  /// sample, score, tail, rate-curve, rate-bound, verify, render, calibrate-L
  std::string command;
  std::string spec = "rgg:alpha=0,t=1";
  double n = 10;
  std::optional<double> a;
  double margin = 3;
  std::size_t trials = 1000;
  std::optional<std::uint64_t> seed;
  /// 0 means one worker per core. Never affects the output.
  int workers = 0;
  int dimension = 2;
  double intensity = 1;
  bool non_strict = false;

  std::string input;   // score: configuration file (text or JSON)
  std::string out;     // output file, or file prefix for render
  std::string csv;     // rate-curve: CSV path
  std::string suite = "all";

  std::vector<double> n_list = {4, 6, 8};
  double target_hits = 0;
  double lambda_lo = 0.1;
  double lambda_hi = 2;
  double window_side = 10;
  bool normalized = false;

  double conditioned = 0.75;
  std::size_t max_attempts = 100000;
  std::size_t palm_trials = 200;

  std::vector<double> L_list = {2, 3, 4, 6, 8, 12};
  double M = 6;
};

/// Parses a command line. On --help or a parse error returns nullopt and
/// sets `exit_code`; errors are reported as JSON on `err`.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out,
                                            std::ostream& err, int& exit_code);

/// Executes a command. JSON lines go to `out` (or to files named in the
/// config); errors are one JSON object on `err`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_command_line followed by run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lowtail
