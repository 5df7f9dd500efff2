#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "nbarrier/errors.hpp"
#include "nbarrier/model.hpp"
#include "nbarrier/profile.hpp"

namespace nbarrier {

struct SolverConfig {
  double newton_tol = 1e-10;
  int max_iters = 50;
  double damping = 0.5;
  double min_step = 1.0 / 1048576.0;  // 2^-20
  /// Number of stages of the homotopy theta_k = theta k / K; 1 means none.
  int continuation_steps = 1;

  void validate() const;
};

struct SolveDiagnostics {
  int iterations = 0;
  double final_norm = 0.0;
  std::vector<double> history;  // residual norm before each Newton step
};

struct SolveResult {
  WaveProfile profile;
  SolveDiagnostics diagnostics;
};

/// Newton did not reach the tolerance, the line search stalled, or the
/// converged profile went negative. Carries the last iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, WaveProfile last, int iterations,
                   double norm)
      : Error(what), last_(std::move(last)), iterations_(iterations), norm_(norm) {}

  const WaveProfile& last_iterate() const { return last_; }
  int iterations() const { return iterations_; }
  double norm() const { return norm_; }

 private:
  WaveProfile last_;
  int iterations_;
  double norm_;
};

/// u(x) = e_minus + (e_plus - e_minus) s(x / width), s the logistic sigmoid,
/// with the end columns set exactly to the boundary states.
WaveProfile initial_guess(const Eigen::VectorXd& e_minus, const Eigen::VectorXd& e_plus,
                          const Grid& grid, double width, double theta = 0.0);

/// Damped Newton on the central-difference discretization with Dirichlet
/// data e_minus at x = -L and e_plus at x = L. The wave speed is sys.theta().
SolveResult solve_wave(const LVSystem& sys, const Eigen::VectorXd& e_minus,
                       const Eigen::VectorXd& e_plus, const Grid& grid,
                       const SolverConfig& config = {}, double width = 1.0);

/// Newton iteration started from an arbitrary profile; the end columns are
/// kept as Dirichlet data and the speed is start.theta.
SolveResult newton_solve(const LVSystem& sys, WaveProfile start,
                         const SolverConfig& config = {});

/// Linear interpolation onto a grid `factor` times finer, then Newton polish.
SolveResult refine(const WaveProfile& profile, int factor, const LVSystem& sys,
                   const SolverConfig& config = {});

/// Solves the block-tridiagonal system
///   lower_j .* x_{j-1} + diag_j x_j + upper_j .* x_{j+1} = rhs_j
/// with diagonal coupling blocks stored as vectors. Exposed for testing.
std::vector<Eigen::VectorXd> solve_block_tridiagonal(
    const std::vector<Eigen::VectorXd>& lower, std::vector<Eigen::MatrixXd> diag,
    const std::vector<Eigen::VectorXd>& upper, std::vector<Eigen::VectorXd> rhs);

}  // namespace nbarrier
