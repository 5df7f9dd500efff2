// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nbarrier/barrier.hpp"
#include "nbarrier/io.hpp"
#include "nbarrier/model.hpp"
#include "nbarrier/nonexistence.hpp"
#include "nbarrier/tangent.hpp"
#include "nbarrier/verify.hpp"
#include "nbarrier/waves.hpp"

using namespace nbarrier;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string report;  // full-precision record for the determinism check
};

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Uniform on (lo, hi].
double uniform_open_low(std::mt19937_64& rng, double lo, double hi) {
  return hi - (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

TwoSpeciesParams symmetric(double d) {
  TwoSpeciesParams p;
  p.d = d;
  return p;
}

Outcome criterion1() {
  const TangencyResult r = tangent_lambda2(symmetric(1.0));
  const double eu = std::abs(r.touch_u - 1.0 / 3);
  const double ev = std::abs(r.touch_v - 1.0 / 3);
  const double el = std::abs(r.lambda2 - 2.0 / 3);
  Outcome o;
  o.pass = r.case_id == TangencyCase::III && eu <= 1e-9 && ev <= 1e-9 && el <= 1e-9;
  o.detail = std::string("case ") + to_string(r.case_id) + fmt(", touch error %.2e", std::max(eu, ev)) +
             fmt(", lambda2 error %.2e", el);
  return o;
}

Outcome criterion2() {
  Outcome o;
  const double t1 = 1.0 / 3, t2 = 3.0;
  int wrong = 0;
  auto expect = [&](double d, TangencyCase c) {
    if (classify_case(symmetric(d)) != c) ++wrong;
  };
  for (int i = 0; i <= 200; ++i) {
    expect(0.01 + (t1 - 1e-9 - 0.01) * i / 200.0, TangencyCase::I);
    expect(t1 + 1e-9 + (t2 - t1 - 2e-9) * i / 200.0, TangencyCase::III);
    expect(t2 + 1e-9 + 20.0 * i / 200.0, TangencyCase::II);
  }
  expect(t1 - 1e-9, TangencyCase::I);
  expect(t1 + 1e-9, TangencyCase::III);
  expect(t2 - 1e-9, TangencyCase::III);
  expect(t2 + 1e-9, TangencyCase::II);
  double jump = 0.0;
  for (double t : {t1, t2}) {
    jump = std::max(jump, std::abs(tangent_lambda2(symmetric(t + 1e-9)).lambda2 -
                                   tangent_lambda2(symmetric(t - 1e-9)).lambda2));
  }
  o.pass = wrong == 0 && jump <= 1e-6;
  o.detail = std::to_string(wrong) + " misclassified, max jump " + fmt("%.2e", jump);
  return o;
}

TwoSpeciesParams random_params(std::mt19937_64& rng) {
  TwoSpeciesParams p;
  p.a1 = uniform_open_low(rng, 1.0, 5.0);
  p.a2 = uniform_open_low(rng, 1.0, 5.0);
  p.d = uniform(rng, 0.1, 10.0);
  p.k = uniform(rng, 0.1, 10.0);
  p.alpha = uniform(rng, 0.1, 10.0);
  p.beta = uniform(rng, 0.1, 10.0);
  return p;
}

std::vector<TwoSpeciesParams> criterion3_draws() {
  std::mt19937_64 rng(20240301);
  std::vector<TwoSpeciesParams> v;
  for (int i = 0; i < 100; ++i) v.push_back(random_params(rng));
  return v;
}

Outcome criterion3() {
  Outcome o;
  int case3 = 0, at_fail = 0, above_fail = 0, sup_fail = 0;
  double worst = 0.0;
  json rows = json::array();
  const auto draws = criterion3_draws();
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const TwoSpeciesParams& p = draws[i];
    const std::uint64_t seed = 1000 + i;
    const TangencyResult r = tangent_lambda2(p);
    const bool at = containment_oracle(r.lambda2, p, 10000, seed).contained;
    if (!at) ++at_fail;
    bool above = false;
    if (r.case_id == TangencyCase::III) {
      ++case3;
      above = containment_oracle(1.001 * r.lambda2, p, 10000, seed).contained;
      if (above) ++above_fail;
    }
    const double sup = containment_sup(p, 10000, seed);
    const double err = std::abs(sup - r.lambda2) / std::max(1.0, r.lambda2);
    worst = std::max(worst, err);
    if (err > 1e-4) ++sup_fail;
    rows.push_back({format_double(r.lambda2), to_string(r.case_id), at, above, format_double(sup)});
  }
  o.pass = at_fail == 0 && above_fail == 0 && sup_fail == 0;
  o.detail = std::to_string(draws.size()) + " draws (" + std::to_string(case3) + " case III), " +
             std::to_string(at_fail) + " rejected at lambda2, " + std::to_string(above_fail) +
             " accepted above, worst sup error " + fmt("%.2e", worst);
  o.report = rows.dump();
  return o;
}

Outcome criterion4() {
  Outcome o;
  int below = 0, equal = 0, equal_interior = 0;
  for (const TwoSpeciesParams& p : criterion3_draws()) {
    const double poly = std::min(p.alpha / p.a2, p.d * p.beta / p.a1);
    const TangencyResult r = tangent_lambda2(p);
    if (r.lambda2 < poly) ++below;
    if (r.lambda2 == poly) {
      ++equal;
      if (r.case_id == TangencyCase::III) ++equal_interior;
    }
  }
  o.pass = below == 0 && equal_interior == 0;
  o.detail = std::to_string(below) + " below the polyhedral level, " + std::to_string(equal) +
             " equal (" + std::to_string(equal_interior) + " in case III)";
  return o;
}

Outcome criterion5() {
  Outcome o;
  const LVSystem sys(vec({1, 1}), vec({1, 1}), (Eigen::MatrixXd(2, 2) << 1, 2, 2, 1).finished());
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const SolveResult r = solve_wave(sys, vec({1, 0}), vec({0, 1}), Grid(40.0, 0.05));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const Bounds b{0.5, 1.0, 1};
    const double h = 0.05;
    const BoundsReport rep = verify_bounds(r.profile, vec({1, 1}), b, 10 * h * h);
    o.pass = r.profile.residual_norm <= 1e-10 && rep.pass && secs < 10.0;
    o.detail = fmt("residual %.2e", r.profile.residual_norm) + fmt(", p in [%.4f", rep.p_min) +
               fmt(", %.4f]", rep.p_max) + fmt(", %.3f s", secs);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = e.what();
  }
  return o;
}

double az(double x) { return std::pow(1.0 + std::exp(x / std::sqrt(6.0)), -2.0); }

// Max deviation from the closed form after aligning the half-height points.
double aligned_error(const WaveProfile& p) {
  double x_half = std::nan("");
  for (int j = 0; j + 1 < p.points(); ++j) {
    const double a = p.values(0, j) - 0.5, b = p.values(0, j + 1) - 0.5;
    if ((a >= 0) != (b >= 0)) {
      x_half = p.x[j] + a / (a - b) * (p.x[j + 1] - p.x[j]);
      break;
    }
  }
  if (std::isnan(x_half)) return std::numeric_limits<double>::infinity();
  // Half height of the closed form.
  const double shift = std::sqrt(6.0) * std::log(std::sqrt(2.0) - 1.0) - x_half;
  double e = 0.0;
  for (int j = 0; j < p.points(); ++j) e = std::max(e, std::abs(p.values(0, j) - az(p.x[j] + shift)));
  return e;
}

Outcome criterion6() {
  Outcome o;
  const LVSystem sys(vec({1}), vec({1}), Eigen::MatrixXd::Ones(1, 1), 5.0 / std::sqrt(6.0));
  try {
    const SolveResult r = solve_wave(sys, vec({1}), vec({0}), Grid(40.0, 0.05));
    const double e1 = aligned_error(r.profile);
    const SolveResult f = refine(r.profile, 2, sys);
    const double e2 = aligned_error(f.profile);
    o.pass = e1 <= 1e-3 && e1 / e2 >= 3.0;
    o.detail = fmt("error %.3e at h = 0.05", e1) + fmt(", %.3e after refine", e2) +
               fmt(", ratio %.2f", e1 / e2);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = e.what();
  }
  return o;
}

LVSystem lv4_preset(double s4) {
  Eigen::MatrixXd c(4, 4);
  c << 1, 2, 3, 1, 3, 1, 2, 1, 2, 3, 1, 1, 1, 1, 1, 1;
  return LVSystem(Eigen::VectorXd::Ones(4), vec({1, 1, 1, s4}), c);
}

Outcome criterion7() {
  Outcome o;
  const LVSystem sys = lv4_preset(0.2);
  const double t = sigma4_threshold(sys);
  const NonexistenceCertificate cert = check_nonexistence(sys);
  const LVSystem reduced = reduced_system(sys, sys.sigma()[3]);
  Eigen::VectorXd alpha(3);
  for (int i = 0; i < 3; ++i) alpha[i] = cert.alpha_star[i];
  const Bounds b = nbmp_bounds(lv_box(reduced), reduced.d(), alpha, 1);
  const double rel = std::abs(cert.h2_lhs - b.lambda_lower) / std::abs(b.lambda_lower);
  o.pass = std::abs(t - 0.25) <= 1e-9 && rel <= 1e-12;
  o.detail = fmt("threshold %.12f", t) + fmt(", H2 relative difference %.1e", rel);
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(808);
  int violations = 0, equal_draws = 0, equal_fail = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 4;
    Eigen::VectorXd lo(n), hi(n), d(n), a(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = uniform(rng, 0.05, 2.0);
      hi[i] = lo[i] * uniform(rng, 1.01, 5.0);
      d[i] = uniform(rng, 0.1, 10.0);
      a[i] = uniform(rng, 0.1, 10.0);
    }
    const bool equal = trial % 4 == 0;
    if (equal) d.setConstant(d[0]);
    const HypothesisBox box(lo, hi);
    const BarrierTriple lower = lower_barrier(box, d, a);
    const BarrierTriple upper = upper_barrier(box, d, a);
    violations += static_cast<int>(nesting_violations(lower, box, d).size() +
                                   nesting_violations(upper, box, d).size());
    if (equal) {
      ++equal_draws;
      if (lower.lambda1 != lower.lambda2 || upper.lambda1 != upper.lambda2) ++equal_fail;
    }
  }
  o.pass = violations == 0 && equal_fail == 0;
  o.detail = "1000 draws, " + std::to_string(violations) + " nesting violations, " +
             std::to_string(equal_fail) + " of " + std::to_string(equal_draws) +
             " equal-diffusion draws with lambda1 != lambda2";
  return o;
}

LVSystem random_system(std::mt19937_64& rng, int n) {
  Eigen::VectorXd d(n), sigma(n);
  Eigen::MatrixXd c(n, n);
  for (int i = 0; i < n; ++i) {
    d[i] = uniform(rng, 0.2, 5.0);
    sigma[i] = uniform(rng, 0.5, 1.5);
    for (int j = 0; j < n; ++j) c(i, j) = i == j ? uniform(rng, 1.0, 2.0) : uniform(rng, 0.2, 3.0);
  }
  return LVSystem(d, sigma, c);
}

// Newton on u .* (sigma - C u); nullopt when it does not converge.
std::optional<Eigen::VectorXd> polish_root(const LVSystem& sys, Eigen::VectorXd u) {
  for (int it = 0; it < 100; ++it) {
    const Eigen::VectorXd f = sys.sigma() - sys.c() * u;
    const Eigen::VectorXd g = u.cwiseProduct(f);
    if (g.lpNorm<Eigen::Infinity>() < 1e-14) return u;
    Eigen::MatrixXd jac = -(u.asDiagonal() * sys.c());
    jac.diagonal() += f;
    const Eigen::VectorXd step = jac.fullPivLu().solve(g);
    if (!step.allFinite()) return std::nullopt;
    u -= step;
  }
  return std::nullopt;
}

Outcome criterion9() {
  Outcome o;
  std::mt19937_64 rng(909);
  const double h = 0.01;
  long long near_zeros = 0, unmatched = 0, polished = 0;
  double farthest = 0.0;
  json rows = json::array();
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 2;
    const LVSystem sys = random_system(rng, n);
    const EquilibriumSet set = enumerate_equilibria(sys);
    const double top = 1.2 * (sys.sigma().array() / sys.c().diagonal().array()).maxCoeff();
    const int steps = static_cast<int>(std::floor(top / h)) + 1;
    long long hits = 0;
    Eigen::VectorXd u(n);
    std::vector<int> idx(n, 0);
    while (true) {
      for (int i = 0; i < n; ++i) u[i] = idx[i] * h;
      if (detail::kinetics(sys, u).lpNorm<Eigen::Infinity>() < 1e-3) {
        ++hits;
        if (!set.contains(u, 0.02)) {
          ++unmatched;
          double best = std::numeric_limits<double>::infinity();
          for (const auto& e : set.points) {
            best = std::min(best, (e.point.values() - u).lpNorm<Eigen::Infinity>());
          }
          farthest = std::max(farthest, best);
          const auto root = polish_root(sys, u);
          if (root && set.contains(*root, 1e-8)) ++polished;
        }
      }
      int k = 0;
      while (k < n && ++idx[k] == steps) idx[k++] = 0;
      if (k == n) break;
    }
    near_zeros += hits;
    json pts = json::array();
    for (const auto& e : set.points) {
      json p = json::array();
      for (int i = 0; i < n; ++i) p.push_back(format_double(e.point.values()[i]));
      pts.push_back(p);
    }
    rows.push_back({n, hits, pts});
  }
  o.pass = unmatched == 0;
  o.detail = "20 systems, " + std::to_string(near_zeros) + " lattice near-zeros, " +
             std::to_string(unmatched) + " unmatched";
  if (unmatched > 0) {
    o.detail += fmt(" (farthest %.3f", farthest) + ", " + std::to_string(polished) +
                " polish onto an enumerated point)";
  }
  o.report = rows.dump();
  return o;
}

Outcome criterion10() {
  Outcome o;
  const Outcome a3 = criterion3(), b3 = criterion3();
  const Outcome a9 = criterion9(), b9 = criterion9();
  const bool same3 = a3.report == b3.report && a3.detail == b3.detail;
  const bool same9 = a9.report == b9.report && a9.detail == b9.detail;
  o.pass = same3 && same9 && !a3.report.empty() && !a9.report.empty();
  o.detail = std::string("criterion 3 reports ") + (same3 ? "identical" : "differ") +
             " (" + std::to_string(a3.report.size()) + " bytes), criterion 9 reports " +
             (same9 ? "identical" : "differ") + " (" + std::to_string(a9.report.size()) +
             " bytes)";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},  {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
