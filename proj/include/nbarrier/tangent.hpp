#pragma once

#include <optional>

namespace nbarrier {

/// Bistable two-species competition system
///
///   u'' + theta u' + u (1 - u - a1 v) = 0,
///   d v'' + theta v' + k v (1 - a2 u - v) = 0,
///
/// together with the weights (alpha, beta) of the combination alpha u + beta v.
struct TwoSpeciesParams {
  double alpha = 1.0;
  double beta = 1.0;
  double d = 1.0;
  double k = 1.0;
  double a1 = 2.0;
  double a2 = 2.0;

  /// Throws ValidationError unless all entries are positive and a1, a2 > 1.
  void validate() const;
  TwoSpeciesParams scaled_weights(double t) const;
};

enum class TangencyCase { I, II, III };

const char* to_string(TangencyCase c);

/// Coefficients of the rational tangency equation
/// (A u^2 + B u + C) / (D u^2 + E u + J) = G.
struct QuadraticCoefficients {
  double A = 0, B = 0, C = 0, D = 0, E = 0, J = 0, G = 0, X = 0;
};

struct TangencyResult {
  TangencyCase case_id = TangencyCase::III;
  double lambda2 = 0.0;
  double touch_u = 0.0;
  double touch_v = 0.0;
  std::optional<QuadraticCoefficients> aux;
};

/// H(u, v) = alpha u (1 - u - a1 v) + beta k v (1 - a2 u - v).
double combined_kinetics(double u, double v, const TwoSpeciesParams& p);

/// Branch of H = 0 through (0, 1) and (1, 0), as v(u) for 0 <= u <= 1.
double hyperbola_v(double u, const TwoSpeciesParams& p);

/// dv/du along the same branch.
double hyperbola_slope(double u, const TwoSpeciesParams& p);

struct EndpointSlopes {
  double at_zero;  // at (0, 1)
  double at_one;   // at (1, 0)
};
EndpointSlopes endpoint_slopes(const TwoSpeciesParams& p);

/// Slope -alpha / (d beta) of the level lines alpha u + d beta v = lambda.
double barrier_slope(const TwoSpeciesParams& p);

TangencyCase classify_case(const TwoSpeciesParams& p);

QuadraticCoefficients tangency_coefficients(const TwoSpeciesParams& p);

/// Largest lambda whose region alpha u + d beta v <= lambda (first quadrant)
/// lies inside H >= 0: a corner value in cases I/II, a tangency in case III.
TangencyResult tangent_lambda2(const TwoSpeciesParams& p);

/// The polyhedral first-step level min(alpha / a2, d beta / a1).
double polyhedral_lambda2(const TwoSpeciesParams& p);

/// min(alpha / (a2 d), beta / a1) min(1, d^2).
double baseline_lower_bound(const TwoSpeciesParams& p);

/// How a barrier level on q = alpha u + d beta v becomes a bound on
/// p = alpha u + beta v.
enum class Composition {
  /// p >= lambda1 / max(1, d).
  diffusion_scaled,
  /// Run the construction with beta replaced by beta / d, so that q is p.
  reweighted,
};

struct ImprovedBound {
  double lambda2 = 0.0;
  double eta = 0.0;
  double lambda1 = 0.0;
  double bound = 0.0;
};

ImprovedBound improved_barrier(const TwoSpeciesParams& p,
                               Composition rule = Composition::diffusion_scaled);

double improved_lower_bound(const TwoSpeciesParams& p,
                            Composition rule = Composition::diffusion_scaled);

/// The same eta / lambda1 pipeline fed with polyhedral_lambda2.
double polyhedral_lower_bound(const TwoSpeciesParams& p,
                              Composition rule = Composition::diffusion_scaled);

}  // namespace nbarrier
