#include "nbarrier/nonexistence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nbarrier/barrier.hpp"
#include "nbarrier/errors.hpp"

namespace nbarrier {
namespace {

void require_four(const LVSystem& sys) {
  if (sys.n() != 4) throw DimensionError("nonexistence test needs a four-species system");
}

}  // namespace

const char* to_string(Verdict v) {
  return v == Verdict::certified_nonexistent ? "certified-nonexistent" : "inconclusive";
}

LVSystem reduced_system(const LVSystem& sys, double sigma4) {
  require_four(sys);
  const auto& c = sys.c();
  Eigen::VectorXd sigma(3);
  for (int i = 0; i < 3; ++i) sigma[i] = sys.sigma()[i] - c(i, 3) * sigma4 / c(3, 3);
  return LVSystem(sys.d().head(3), sigma, c.topLeftCorner(3, 3),
                  sys.m().head(3), sys.theta());
}

NonexistenceCertificate certificate_at(const LVSystem& sys, double sigma4,
                                       DiffusionRange range) {
  require_four(sys);
  if (!(sigma4 >= 0.0) || !std::isfinite(sigma4)) {
    throw ValidationError("sigma4 must be nonnegative and finite");
  }
  const auto& c = sys.c();
  NonexistenceCertificate cert;
  cert.h2_rhs = sigma4;
  cert.h1_holds = true;
  for (int i = 0; i < 3; ++i) {
    cert.alpha_star[i] = c(3, i);
    cert.sigma_tilde[i] = sys.sigma()[i] - c(i, 3) * sigma4 / c(3, 3);
    if (!(cert.sigma_tilde[i] > 0.0)) cert.h1_holds = false;
  }
  if (!cert.h1_holds) return cert;

  // Only the lower intercepts enter [H2], so a box whose upper side happens
  // to be degenerate does not block the test.
  const Eigen::VectorXd lower = lower_intercepts(reduced_system(sys, sigma4));
  double weighted = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) weighted = std::min(weighted, cert.alpha_star[i] * lower[i]);

  const Eigen::VectorXd d =
      range == DiffusionRange::all_four ? Eigen::VectorXd(sys.d()) : Eigen::VectorXd(sys.d().head(3));
  cert.h2_lhs = weighted * d.minCoeff() / d.maxCoeff();
  cert.h2_holds = cert.h2_lhs >= sigma4;
  if (cert.h2_holds) cert.verdict = Verdict::certified_nonexistent;
  return cert;
}

NonexistenceCertificate check_nonexistence(const LVSystem& sys, DiffusionRange range) {
  require_four(sys);
  return certificate_at(sys, sys.sigma()[3], range);
}

double sigma4_threshold(const LVSystem& sys, DiffusionRange range, double tol) {
  require_four(sys);
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  auto certified = [&](double s4) {
    return certificate_at(sys, s4, range).verdict == Verdict::certified_nonexistent;
  };
  if (!certified(0.0)) return 0.0;

  // [H1] fails at and beyond min_i sigma_i c_44 / c_i4.
  double hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    hi = std::min(hi, sys.sigma()[i] * sys.c()(3, 3) / sys.c()(i, 3));
  }
  double lo = 0.0;
  if (certified(hi)) return hi;
  while (hi - lo > 0.01 * tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (certified(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace nbarrier
