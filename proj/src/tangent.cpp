#include "nbarrier/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nbarrier/errors.hpp"

namespace nbarrier {
namespace {

constexpr double kTangencyResidualTol = 1e-9;
constexpr double kDegenerateLeading = 1e-12;

struct Branch {
  double b;     // linear coefficient of beta k v^2 + b v - alpha u (1 - u) = 0
  double disc;  // b^2 - 4 alpha beta k u (u - 1)
};

Branch branch_terms(double u, const TwoSpeciesParams& p) {
  const double b = p.alpha * p.a1 * u + p.beta * p.k * (p.a2 * u - 1.0);
  const double disc = b * b - 4.0 * p.alpha * p.beta * p.k * u * (u - 1.0);
  return {b, disc};
}

void require_unit_interval(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    std::ostringstream msg;
    msg << "u = " << u << " is outside [0, 1]";
    throw DomainError(msg.str());
  }
}

// Scaled mismatch between the branch slope at u and the barrier slope.
double tangency_residual(double u, const TwoSpeciesParams& p) {
  const double s = barrier_slope(p);
  return std::abs(hyperbola_slope(u, p) - s) / std::max(1.0, std::abs(s));
}

}  // namespace

void TwoSpeciesParams::validate() const {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(alpha)) throw ValidationError("alpha must be positive");
  if (!positive(beta)) throw ValidationError("beta must be positive");
  if (!positive(d)) throw ValidationError("d must be positive");
  if (!positive(k)) throw ValidationError("k must be positive");
  if (!(a1 > 1.0) || !std::isfinite(a1)) {
    throw ValidationError("a1 must exceed 1 (bistable condition)");
  }
  if (!(a2 > 1.0) || !std::isfinite(a2)) {
    throw ValidationError("a2 must exceed 1 (bistable condition)");
  }
}

TwoSpeciesParams TwoSpeciesParams::scaled_weights(double t) const {
  TwoSpeciesParams q = *this;
  q.alpha *= t;
  q.beta *= t;
  return q;
}

const char* to_string(TangencyCase c) {
  switch (c) {
    case TangencyCase::I:
      return "I";
    case TangencyCase::II:
      return "II";
    case TangencyCase::III:
      return "III";
  }
  return "?";
}

double combined_kinetics(double u, double v, const TwoSpeciesParams& p) {
  return p.alpha * u * (1.0 - u - p.a1 * v) + p.beta * p.k * v * (1.0 - p.a2 * u - v);
}

double hyperbola_v(double u, const TwoSpeciesParams& p) {
  p.validate();
  require_unit_interval(u);
  const auto [b, disc] = branch_terms(u, p);
  if (disc < 0.0) throw DomainError("negative discriminant on the (0,1)-(1,0) branch");
  const double root = std::sqrt(disc);
  // Positive root of beta k v^2 + b v - alpha u (1 - u) = 0, written to avoid
  // cancellation when b > 0.
  if (b <= 0.0) return (-b + root) / (2.0 * p.beta * p.k);
  return 2.0 * p.alpha * u * (1.0 - u) / (b + root);
}

double hyperbola_slope(double u, const TwoSpeciesParams& p) {
  p.validate();
  require_unit_interval(u);
  const auto [b, disc] = branch_terms(u, p);
  if (!(disc > 0.0)) throw DomainError("zero discriminant: tangency is degenerate");
  const double x = p.alpha * p.a1 + p.beta * p.k * p.a2;
  const double num = b * x - 2.0 * p.alpha * p.beta * p.k * (2.0 * u - 1.0);
  return (-x + num / std::sqrt(disc)) / (2.0 * p.beta * p.k);
}

EndpointSlopes endpoint_slopes(const TwoSpeciesParams& p) {
  p.validate();
  const double bk = p.beta * p.k;
  return {(-p.alpha * (p.a1 - 1.0) - bk * p.a2) / bk,
          -p.alpha / (p.alpha * p.a1 + bk * (p.a2 - 1.0))};
}

double barrier_slope(const TwoSpeciesParams& p) { return -p.alpha / (p.d * p.beta); }

TangencyCase classify_case(const TwoSpeciesParams& p) {
  const auto ends = endpoint_slopes(p);
  const double s = barrier_slope(p);
  if (s <= ends.at_zero) return TangencyCase::I;
  if (s >= ends.at_one) return TangencyCase::II;
  return TangencyCase::III;
}

QuadraticCoefficients tangency_coefficients(const TwoSpeciesParams& p) {
  p.validate();
  const double abk = p.alpha * p.beta * p.k;
  const double bk = p.beta * p.k;
  QuadraticCoefficients q;
  q.X = p.alpha * p.a1 + bk * p.a2;
  const double lead = q.X * q.X - 4.0 * abk;
  const double shift = -bk * q.X + 2.0 * abk;
  q.A = lead * lead;
  // Cross term of (lead u + shift)^2.
  q.B = 2.0 * lead * shift;
  q.C = shift * shift;
  q.D = lead;
  q.E = 2.0 * shift;
  q.J = bk * bk;
  const double g = q.X - 2.0 * p.alpha * p.k / p.d;
  q.G = g * g;
  return q;
}

TangencyResult tangent_lambda2(const TwoSpeciesParams& p) {
  p.validate();
  TangencyResult r;
  r.case_id = classify_case(p);
  switch (r.case_id) {
    case TangencyCase::I:
      r.lambda2 = p.d * p.beta;
      r.touch_u = 0.0;
      r.touch_v = 1.0;
      return r;
    case TangencyCase::II:
      r.lambda2 = p.alpha;
      r.touch_u = 1.0;
      r.touch_v = 0.0;
      return r;
    case TangencyCase::III:
      break;
  }

  const auto q = tangency_coefficients(p);
  r.aux = q;
  const double a = q.A - q.D * q.G;
  const double b = q.B - q.E * q.G;
  const double c = q.C - q.J * q.G;

  double roots[2];
  int nroots = 0;
  if (std::abs(a) <= kDegenerateLeading * std::abs(q.A)) {
    if (b != 0.0) roots[nroots++] = -c / b;
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double h = -0.5 * (b + std::copysign(sq, b));
      if (h != 0.0) {
        roots[nroots++] = h / a;
        roots[nroots++] = c / h;
      } else {
        roots[nroots++] = 0.0;
      }
    }
  }

  double best_u = 0.0;
  double best_res = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nroots; ++i) {
    const double u = roots[i];
    if (!(u > 0.0 && u < 1.0)) continue;
    if (!(hyperbola_v(u, p) > 0.0)) continue;
    const double res = tangency_residual(u, p);
    if (res <= kTangencyResidualTol && res < best_res) {
      best_u = u;
      best_res = res;
    }
  }
  if (!std::isfinite(best_res)) {
    std::ostringstream msg;
    msg << "no admissible tangency root in case III; candidates:";
    for (int i = 0; i < nroots; ++i) msg << ' ' << roots[i];
    if (nroots == 0) msg << " none (negative discriminant)";
    throw InconsistencyError(msg.str());
  }

  r.touch_u = best_u;
  r.touch_v = hyperbola_v(best_u, p);
  r.lambda2 = p.alpha * r.touch_u + p.d * p.beta * r.touch_v;
  return r;
}

double polyhedral_lambda2(const TwoSpeciesParams& p) {
  p.validate();
  return std::min(p.alpha / p.a2, p.d * p.beta / p.a1);
}

double baseline_lower_bound(const TwoSpeciesParams& p) {
  p.validate();
  return std::min(p.alpha / (p.a2 * p.d), p.beta / p.a1) * std::min(1.0, p.d * p.d);
}

namespace {

ImprovedBound compose(double lambda2, const TwoSpeciesParams& p, Composition rule) {
  ImprovedBound out;
  out.lambda2 = lambda2;
  const double dmax = std::max(1.0, p.d);
  const double dmin = std::min(1.0, p.d);
  out.eta = lambda2 / dmax;
  out.lambda1 = out.eta * dmin;
  out.bound = rule == Composition::diffusion_scaled ? out.lambda1 / dmax : out.lambda1;
  return out;
}

TwoSpeciesParams construction_params(const TwoSpeciesParams& p, Composition rule) {
  if (rule == Composition::diffusion_scaled) return p;
  TwoSpeciesParams q = p;
  q.beta = p.beta / p.d;
  return q;
}

}  // namespace

ImprovedBound improved_barrier(const TwoSpeciesParams& p, Composition rule) {
  p.validate();
  return compose(tangent_lambda2(construction_params(p, rule)).lambda2, p, rule);
}

double improved_lower_bound(const TwoSpeciesParams& p, Composition rule) {
  return improved_barrier(p, rule).bound;
}

double polyhedral_lower_bound(const TwoSpeciesParams& p, Composition rule) {
  p.validate();
  return compose(polyhedral_lambda2(construction_params(p, rule)), p, rule).bound;
}

}  // namespace nbarrier
