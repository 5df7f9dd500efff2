#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nbarrier/barrier.hpp"
#include "nbarrier/profile.hpp"
#include "nbarrier/tangent.hpp"

namespace nbarrier {

struct BoundViolation {
  enum class Quantity { p, q };
  enum class Side { lower, upper };
  double x = 0.0;
  double value = 0.0;
  Quantity quantity = Quantity::p;
  Side side = Side::lower;
};

/// Lower and upper N-barriers together with the diffusion rates that define
/// q = sum_i alpha_i d_i u_i.
struct BarrierPair {
  BarrierTriple lower;
  BarrierTriple upper;
  Eigen::VectorXd d;
};

struct BarrierCheck {
  double q_min = 0.0;
  double q_max = 0.0;
  double lower_lambda1 = 0.0;
  double upper_lambda1 = 0.0;
};

struct BoundsReport {
  Eigen::VectorXd alpha;
  double p_min = 0.0;
  double p_max = 0.0;
  double lambda_lower = 0.0;
  double lambda_upper = 0.0;
  double tol = 0.0;
  std::vector<BoundViolation> violations;
  std::optional<BarrierCheck> barrier;
  bool pass = true;
};

/// Evaluates p(x_j) = sum_i alpha_i u_i(x_j) on every grid point and records
/// points outside [lambda_lower - tol, lambda_upper + tol]. With barriers,
/// q(x_j) is also checked against the two lambda1 levels.
BoundsReport verify_bounds(const WaveProfile& profile, const Eigen::VectorXd& alpha,
                           const Bounds& bounds, double tol,
                           const BarrierPair* barriers = nullptr);

struct ContainmentWitness {
  double u = 0.0;
  double v = 0.0;
  double h = 0.0;
};

struct ContainmentResult {
  bool contained = true;
  std::optional<ContainmentWitness> witness;
};

/// Sampled test of {alpha u + d beta v <= lambda, u, v >= 0} inside H >= 0.
/// Checks the three corners, n_samples uniform points of the triangle and
/// n_samples uniform points of its slanted edge.
ContainmentResult containment_oracle(double lambda, const TwoSpeciesParams& p,
                                     int n_samples, std::uint64_t seed);

/// sup{lambda : containment_oracle passes}, located by bisection on
/// (0, 1.01 min(alpha, d beta)] until the bracket is below rel_tol lambda.
double containment_sup(const TwoSpeciesParams& p, int n_samples, std::uint64_t seed,
                       double rel_tol = 1e-7);

struct BoundComparison {
  double baseline = 0.0;
  double improved = 0.0;
  double polyhedral = 0.0;
  double ratio = 0.0;  // improved / baseline
};

/// Baseline and tangent-line lower bounds side by side. Throws
/// InconsistencyError if the improved bound falls below the polyhedral
/// pipeline value.
BoundComparison compare_bounds(const TwoSpeciesParams& p,
                               Composition rule = Composition::diffusion_scaled);

}  // namespace nbarrier
