#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nbarrier::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kInconclusive = 3,
  kViolation = 4,
  kNonConvergence = 5,
};

/// Parsed command line. Fields not used by a command are ignored.
struct RunConfig {
  std::string command;
  std::string system_path;
  std::string output_path;  // empty: standard output

  std::vector<double> alpha;
  std::vector<double> e_minus;
  std::vector<double> e_plus;
  double chi_tol = 1e-9;

  // box
  int samples = 0;
  std::optional<std::uint64_t> seed;

  // barrier
  std::string kind = "both";

  // tangent
  double t_alpha = 1.0;
  double t_beta = 1.0;
  double t_d = 1.0;
  double t_k = 1.0;
  double t_a1 = 2.0;
  double t_a2 = 2.0;
  std::string rule = "diffusion_scaled";
  std::string plot_path;
  int plot_points = 201;

  // nonexist
  std::optional<double> sigma4;
  std::string d_range = "all";
  bool threshold = false;

  // solve
  double half_length = 40.0;
  double spacing = 0.05;
  std::optional<double> theta;
  double width = 1.0;
  int refine = 1;
  int continuation = 1;
  double newton_tol = 1e-10;
  int max_iters = 50;
  std::string meta_path;

  // verify
  std::string profile_path;
  std::optional<double> tol;
  bool barriers = false;

  // sweep
  std::string target = "tangent";
  std::string param;
  double from = 0.0;
  double to = 0.0;
  double step = 0.0;
};

/// Executes one command and returns its exit code. Structured output goes to
/// `out` (or output_path); errors and the summary line go to the log.
int run(const RunConfig& config, std::ostream& out);

/// Parses argv-style arguments (without the program name) and runs.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Sweep values from, from + step, ..., up to `to` (inclusive within 1e-9
/// steps). Empty when step <= 0 or to < from.
std::vector<double> sweep_values(double from, double to, double step);

}  // namespace nbarrier::cli
