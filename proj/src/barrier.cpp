#include "nbarrier/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "nbarrier/errors.hpp"

namespace nbarrier {
namespace {

// Relative slack for the cross-multiplied nesting comparisons; the chain
// holds with equality in exact arithmetic in several branches.
constexpr double kNestingSlack = 8.0 * std::numeric_limits<double>::epsilon();

void validate_weights(const HypothesisBox& box, const Eigen::VectorXd& d,
                      const Eigen::VectorXd& alpha) {
  if (d.size() != box.n()) throw DimensionError("d must have one entry per species");
  if (alpha.size() != box.n()) {
    throw DimensionError("alpha must have one entry per species");
  }
  for (int i = 0; i < box.n(); ++i) {
    if (!(d[i] > 0.0) || !std::isfinite(d[i])) {
      throw ValidationError("diffusion rates must be positive");
    }
    if (!(alpha[i] > 0.0) || !std::isfinite(alpha[i])) {
      throw ValidationError("weights alpha must be positive");
    }
  }
}

bool all_equal(const Eigen::VectorXd& d) {
  return (d.array() == d[0]).all();
}

bool leq(double a, double b) { return a <= b + kNestingSlack * std::abs(b); }

}  // namespace

HypothesisBox::HypothesisBox(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() < 1) {
    throw DimensionError("box bounds must be nonempty and of equal length");
  }
  for (int i = 0; i < n(); ++i) {
    if (!(lower_[i] > 0.0) || !std::isfinite(upper_[i])) {
      std::ostringstream msg;
      msg << "box bounds for species " << i << " must be positive and finite";
      throw ValidationError(msg.str());
    }
    if (!(upper_[i] > lower_[i])) {
      std::ostringstream msg;
      msg << "degenerate box: upper[" << i << "] = " << upper_[i]
          << " is not above lower[" << i << "] = " << lower_[i];
      throw DegenerateBoxError(msg.str());
    }
  }
}

Eigen::VectorXd lower_intercepts(const LVSystem& sys) {
  const int n = sys.n();
  Eigen::VectorXd lo(n);
  for (int i = 0; i < n; ++i) {
    double v = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) v = std::min(v, sys.sigma()[j] / sys.c()(j, i));
    lo[i] = v;
  }
  return lo;
}

HypothesisBox lv_box(const LVSystem& sys) {
  const int n = sys.n();
  if (n < 2) throw PreconditionError("lv_box needs at least two species");
  Eigen::VectorXd hi(n);
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int j = 0; j < n; ++j) v = std::max(v, sys.sigma()[j] / sys.c()(j, i));
    hi[i] = v;
  }
  return HypothesisBox(lower_intercepts(sys), hi);
}

HypothesisReport check_hypothesis_H(const LVSystem& sys, const HypothesisBox& box,
                                    int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw PreconditionError("n_samples must be >= 1");
  const int n = sys.n();
  if (box.n() != n) throw DimensionError("box dimension must equal n");

  HypothesisReport report;
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  const double side = 2.0 * box.upper().maxCoeff();
  std::uniform_real_distribution<double> cube(0.0, side);

  // f_i may round slightly negative at the inner vertices.
  auto slack = [&](const Eigen::VectorXd& u, int i) {
    double s = sys.sigma()[i];
    for (int j = 0; j < n; ++j) s += sys.c()(i, j) * u[j];
    return 1e-12 * s;
  };

  auto check_inner = [&](const Eigen::VectorXd& u) {
    ++report.inner_checked;
    const Eigen::VectorXd f = sys.growth(u);
    for (int i = 0; i < n; ++i) {
      if (f[i] < -slack(u, i)) {
        report.holds = false;
        report.witness = HypothesisWitness{HypothesisWitness::Region::inner, u, i, f[i]};
        return false;
      }
    }
    return true;
  };
  auto check_outer = [&](const Eigen::VectorXd& u) {
    ++report.outer_checked;
    const Eigen::VectorXd f = sys.growth(u);
    for (int i = 0; i < n; ++i) {
      if (f[i] > slack(u, i)) {
        report.holds = false;
        report.witness = HypothesisWitness{HypothesisWitness::Region::outer, u, i, f[i]};
        return false;
      }
    }
    return true;
  };

  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v[i] = box.lower()[i];
    if (!check_inner(v)) return report;
    v[i] = box.upper()[i];
    if (!check_outer(v)) return report;
  }

  Eigen::VectorXd e(n + 1);
  for (int s = 0; s < n_samples; ++s) {
    for (int i = 0; i <= n; ++i) e[i] = expo(rng);
    const double total = e.sum();
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = box.lower()[i] * e[i] / total;
    if (!check_inner(u)) return report;
  }

  int accepted = 0;
  Eigen::VectorXd u(n);
  while (accepted < n_samples) {
    for (int i = 0; i < n; ++i) u[i] = cube(rng);
    if ((u.array() / box.upper().array()).sum() < 1.0) continue;
    ++accepted;
    if (!check_outer(u)) return report;
  }
  return report;
}

int chi(const Eigen::VectorXd& e_minus, const Eigen::VectorXd& e_plus, double tol) {
  if (tol < 0.0) throw PreconditionError("chi tolerance must be nonnegative");
  const double lo = e_minus.size() ? e_minus.lpNorm<Eigen::Infinity>() : 0.0;
  const double hi = e_plus.size() ? e_plus.lpNorm<Eigen::Infinity>() : 0.0;
  return (lo < tol || hi < tol) ? 0 : 1;
}

Bounds nbmp_bounds(const HypothesisBox& box, const Eigen::VectorXd& d,
                   const Eigen::VectorXd& alpha, int chi) {
  validate_weights(box, d, alpha);
  if (chi != 0 && chi != 1) throw ValidationError("chi must be 0 or 1");
  const double dmin = d.minCoeff();
  const double dmax = d.maxCoeff();
  const double hi = alpha.cwiseProduct(box.upper()).maxCoeff();
  const double lo = alpha.cwiseProduct(box.lower()).minCoeff();
  Bounds b;
  b.chi = chi;
  b.lambda_upper = hi * dmax / dmin;
  b.lambda_lower = chi ? lo * dmin / dmax : 0.0;
  return b;
}

BarrierTriple lower_barrier(const HypothesisBox& box, const Eigen::VectorXd& d,
                            const Eigen::VectorXd& alpha) {
  validate_weights(box, d, alpha);
  BarrierTriple t;
  t.kind = BarrierKind::lower;
  t.alpha = alpha;
  if (all_equal(d)) {
    // q = d p: the three hyperplanes coincide.
    t.eta = alpha.cwiseProduct(box.lower()).minCoeff();
    t.lambda2 = d[0] * t.eta;
    t.lambda1 = t.lambda2;
    return t;
  }
  double l2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < box.n(); ++i) l2 = std::min(l2, alpha[i] * d[i] * box.lower()[i]);
  t.lambda2 = l2;
  t.eta = l2 / d.maxCoeff();
  t.lambda1 = t.eta * d.minCoeff();
  return t;
}

BarrierTriple upper_barrier(const HypothesisBox& box, const Eigen::VectorXd& d,
                            const Eigen::VectorXd& alpha) {
  validate_weights(box, d, alpha);
  BarrierTriple t;
  t.kind = BarrierKind::upper;
  t.alpha = alpha;
  if (all_equal(d)) {
    t.eta = alpha.cwiseProduct(box.upper()).maxCoeff();
    t.lambda2 = d[0] * t.eta;
    t.lambda1 = t.lambda2;
    return t;
  }
  double l2 = 0.0;
  for (int i = 0; i < box.n(); ++i) l2 = std::max(l2, alpha[i] * d[i] * box.upper()[i]);
  t.lambda2 = l2;
  t.eta = l2 / d.minCoeff();
  t.lambda1 = t.eta * d.maxCoeff();
  return t;
}

std::vector<NestingViolation> nesting_violations(const BarrierTriple& barrier,
                                                 const HypothesisBox& box,
                                                 const Eigen::VectorXd& d) {
  validate_weights(box, d, barrier.alpha);
  std::vector<NestingViolation> out;
  const auto& a = barrier.alpha;
  for (int i = 0; i < box.n(); ++i) {
    const double eta_di = barrier.eta * d[i];
    if (barrier.kind == BarrierKind::lower) {
      if (!leq(barrier.lambda1, eta_di)) out.push_back({i, 0});
      if (!leq(eta_di, barrier.lambda2)) out.push_back({i, 1});
      if (!leq(barrier.lambda2, a[i] * d[i] * box.lower()[i])) out.push_back({i, 2});
    } else {
      if (!leq(eta_di, barrier.lambda1)) out.push_back({i, 0});
      if (!leq(barrier.lambda2, eta_di)) out.push_back({i, 1});
      if (!leq(a[i] * d[i] * box.upper()[i], barrier.lambda2)) out.push_back({i, 2});
    }
  }
  return out;
}

}  // namespace nbarrier
