#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "nbarrier/model.hpp"

namespace nbarrier {

/// Per-species levels 0 < lower_i < upper_i. All kinetics are nonnegative on
/// the inner simplex sum_i u_i / lower_i <= 1 and nonpositive outside the
/// outer simplex sum_i u_i / upper_i >= 1.
class HypothesisBox {
 public:
  HypothesisBox(Eigen::VectorXd lower, Eigen::VectorXd upper);

  int n() const { return static_cast<int>(lower_.size()); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

enum class BarrierKind { lower, upper };

/// Levels of the hyperplanes sum a_i d_i u_i = lambda2, sum a_i u_i = eta and
/// sum a_i d_i u_i = lambda1 forming an N-barrier.
struct BarrierTriple {
  BarrierKind kind = BarrierKind::lower;
  Eigen::VectorXd alpha;
  double lambda1 = 0.0;
  double eta = 0.0;
  double lambda2 = 0.0;
};

struct Bounds {
  double lambda_lower = 0.0;
  double lambda_upper = 0.0;
  int chi = 1;
};

/// Column-wise intercept extrema of the kinetic hyperplanes
/// sigma_j = sum_i c_ji u_i: lower_i = min_j sigma_j / c_ji and
/// upper_i = max_j sigma_j / c_ji. Throws DegenerateBoxError when they
/// coincide for some species.
HypothesisBox lv_box(const LVSystem& sys);

/// min_j sigma_j / c_ji without the strictness check on the upper side.
Eigen::VectorXd lower_intercepts(const LVSystem& sys);

struct HypothesisWitness {
  enum class Region { inner, outer };
  Region region = Region::inner;
  Eigen::VectorXd point;
  int species = 0;
  double growth = 0.0;
};

struct HypothesisReport {
  bool holds = true;
  std::optional<HypothesisWitness> witness;
  int inner_checked = 0;
  int outer_checked = 0;
};

/// Sampled falsification of the box hypothesis: n_samples uniform points of
/// the inner simplex (f_i >= 0 expected) and n_samples uniform points of the
/// outer region clipped to [0, 2 max upper]^n (f_i <= 0 expected), plus the
/// simplex vertices. Not a proof.
HypothesisReport check_hypothesis_H(const LVSystem& sys, const HypothesisBox& box,
                                    int n_samples, std::uint64_t seed);

/// 0 if either boundary state has max norm below tol, 1 otherwise.
int chi(const Eigen::VectorXd& e_minus, const Eigen::VectorXd& e_plus, double tol);

Bounds nbmp_bounds(const HypothesisBox& box, const Eigen::VectorXd& d,
                   const Eigen::VectorXd& alpha, int chi);

BarrierTriple lower_barrier(const HypothesisBox& box, const Eigen::VectorXd& d,
                            const Eigen::VectorXd& alpha);
BarrierTriple upper_barrier(const HypothesisBox& box, const Eigen::VectorXd& d,
                            const Eigen::VectorXd& alpha);

struct NestingViolation {
  int species = 0;
  int link = 0;  // 0: lambda1 vs eta, 1: eta vs lambda2, 2: lambda2 vs box
};

/// Checks the intercept chain of a barrier in cross-multiplied form, e.g. for
/// the lower kind lambda1 <= eta d_i <= lambda2 <= a_i d_i lower_i, which is
/// lambda1/(a_i d_i) <= eta/a_i <= lambda2/(a_i d_i) <= lower_i without
/// rounding from the divisions.
std::vector<NestingViolation> nesting_violations(const BarrierTriple& barrier,
                                                 const HypothesisBox& box,
                                                 const Eigen::VectorXd& d);

}  // namespace nbarrier
