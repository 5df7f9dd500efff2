#include "nbarrier/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nbarrier/errors.hpp"

namespace nbarrier {
namespace {

constexpr double kContainmentSlack = 1e-12;

}  // namespace

BoundsReport verify_bounds(const WaveProfile& profile, const Eigen::VectorXd& alpha,
                           const Bounds& bounds, double tol, const BarrierPair* barriers) {
  const int n = profile.species();
  if (alpha.size() != n) throw DimensionError("alpha must have one entry per species");
  if (profile.x.size() != profile.points()) throw DimensionError("profile x length mismatch");
  if (profile.points() < 1) throw PreconditionError("profile is empty");
  if (!(tol >= 0.0)) throw PreconditionError("tolerance must be nonnegative");
  for (int i = 0; i < n; ++i) {
    if (!(alpha[i] > 0.0)) throw ValidationError("weights alpha must be positive");
  }

  BoundsReport r;
  r.alpha = alpha;
  r.lambda_lower = bounds.lambda_lower;
  r.lambda_upper = bounds.lambda_upper;
  r.tol = tol;

  const Eigen::VectorXd p = profile.values.transpose() * alpha;
  r.p_min = p.minCoeff();
  r.p_max = p.maxCoeff();
  using Q = BoundViolation::Quantity;
  using S = BoundViolation::Side;
  for (int j = 0; j < profile.points(); ++j) {
    if (p[j] < bounds.lambda_lower - tol) r.violations.push_back({profile.x[j], p[j], Q::p, S::lower});
    if (p[j] > bounds.lambda_upper + tol) r.violations.push_back({profile.x[j], p[j], Q::p, S::upper});
  }

  if (barriers != nullptr) {
    if (barriers->d.size() != n) throw DimensionError("barrier diffusions must match species");
    const Eigen::VectorXd q =
        profile.values.transpose() * alpha.cwiseProduct(barriers->d);
    BarrierCheck bc;
    bc.q_min = q.minCoeff();
    bc.q_max = q.maxCoeff();
    bc.lower_lambda1 = barriers->lower.lambda1;
    bc.upper_lambda1 = barriers->upper.lambda1;
    for (int j = 0; j < profile.points(); ++j) {
      if (q[j] < bc.lower_lambda1 - tol) r.violations.push_back({profile.x[j], q[j], Q::q, S::lower});
      if (q[j] > bc.upper_lambda1 + tol) r.violations.push_back({profile.x[j], q[j], Q::q, S::upper});
    }
    r.barrier = bc;
  }
  r.pass = r.violations.empty();
  return r;
}

ContainmentResult containment_oracle(double lambda, const TwoSpeciesParams& p,
                                     int n_samples, std::uint64_t seed) {
  p.validate();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw PreconditionError("lambda must be positive");
  }
  if (n_samples < 1) throw PreconditionError("n_samples must be >= 1");

  const double u_end = lambda / p.alpha;
  const double v_end = lambda / (p.d * p.beta);
  ContainmentResult out;
  auto probe = [&](double u, double v) {
    const double h = combined_kinetics(u, v, p);
    if (h < -kContainmentSlack) {
      out.contained = false;
      out.witness = ContainmentWitness{u, v, h};
      return false;
    }
    return true;
  };

  if (!probe(0.0, 0.0) || !probe(u_end, 0.0) || !probe(0.0, v_end)) return out;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < n_samples; ++s) {
    const double r = std::sqrt(unit(rng));
    const double t = unit(rng);
    if (!probe(r * (1.0 - t) * u_end, r * t * v_end)) return out;
  }
  // The region H >= 0 is a down-set in the first quadrant, so the slanted
  // edge is where containment fails first.
  for (int s = 0; s < n_samples; ++s) {
    const double t = unit(rng);
    if (!probe((1.0 - t) * u_end, t * v_end)) return out;
  }
  return out;
}

double containment_sup(const TwoSpeciesParams& p, int n_samples, std::uint64_t seed,
                       double rel_tol) {
  p.validate();
  if (!(rel_tol > 0.0)) throw ValidationError("rel_tol must be positive");
  // Both intercepts of a contained region are at most 1.
  double hi = 1.01 * std::min(p.alpha, p.d * p.beta);
  double lo = 0.0;
  if (containment_oracle(hi, p, n_samples, seed).contained) return hi;
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (containment_oracle(mid, p, n_samples, seed).contained ? lo : hi) = mid;
  }
  return lo;
}

BoundComparison compare_bounds(const TwoSpeciesParams& p, Composition rule) {
  BoundComparison c;
  c.baseline = baseline_lower_bound(p);
  c.improved = improved_lower_bound(p, rule);
  c.polyhedral = polyhedral_lower_bound(p, rule);
  c.ratio = c.improved / c.baseline;
  if (c.improved < c.polyhedral * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "improved bound " << c.improved << " is below the polyhedral value "
        << c.polyhedral;
    throw InconsistencyError(msg.str());
  }
  return c;
}

}  // namespace nbarrier
