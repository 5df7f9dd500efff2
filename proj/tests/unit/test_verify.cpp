#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "nbarrier/barrier.hpp"
#include "nbarrier/errors.hpp"
#include "nbarrier/verify.hpp"
#include "nbarrier/waves.hpp"

using namespace nbarrier;
using doctest::Approx;
using testutil::uniform;
using testutil::vec;

namespace {

const WaveProfile& pair_front() {
  static const WaveProfile p =
      solve_wave(testutil::bistable_pair(), vec({1, 0}), vec({0, 1}), Grid(40.0, 0.05)).profile;
  return p;
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("bistable front lies between the bounds") {
  const LVSystem sys = testutil::bistable_pair();
  const WaveProfile& p = pair_front();
  const HypothesisBox box = lv_box(sys);
  const Eigen::VectorXd alpha = vec({1, 1});
  const Bounds b = nbmp_bounds(box, sys.d(), alpha, chi(p.e_minus, p.e_plus, 1e-9));
  CHECK(b.lambda_lower == Approx(0.5));
  CHECK(b.lambda_upper == Approx(1.0));
  const double tol = 10 * 0.05 * 0.05;
  const BoundsReport r = verify_bounds(p, alpha, b, tol);
  CHECK(r.pass);
  CHECK(r.violations.empty());
  CHECK(r.p_min >= 0.5 - tol);
  CHECK(r.p_max <= 1.0 + tol);
  CHECK(r.p_max == Approx(1.0));
  CHECK(!r.barrier);

  BarrierPair bp{lower_barrier(box, sys.d(), alpha), upper_barrier(box, sys.d(), alpha), sys.d()};
  const BoundsReport rb = verify_bounds(p, alpha, b, tol, &bp);
  CHECK(rb.pass);
  REQUIRE(rb.barrier);
  CHECK(rb.barrier->q_min >= rb.barrier->lower_lambda1 - tol);
}

TEST_CASE("violations name the quantity and side") {
  const WaveProfile& p = pair_front();
  const Eigen::VectorXd alpha = vec({1, 1});
  Bounds tight;
  tight.lambda_lower = 0.9;
  tight.lambda_upper = 0.95;
  const BoundsReport r = verify_bounds(p, alpha, tight, 0.0);
  CHECK(!r.pass);
  bool low = false, high = false;
  for (const auto& v : r.violations) {
    CHECK(v.quantity == BoundViolation::Quantity::p);
    low |= v.side == BoundViolation::Side::lower && v.value < 0.9;
    high |= v.side == BoundViolation::Side::upper && v.value > 0.95;
  }
  CHECK(low);
  CHECK(high);

  Bounds loose{0.0, 10.0, 1};
  BarrierPair bp;
  bp.d = vec({1, 1});
  bp.lower = BarrierTriple{BarrierKind::lower, alpha, 0.9, 0.9, 0.9};
  bp.upper = BarrierTriple{BarrierKind::upper, alpha, 2.0, 2.0, 2.0};
  const BoundsReport q = verify_bounds(p, alpha, loose, 0.0, &bp);
  CHECK(!q.pass);
  for (const auto& v : q.violations) CHECK(v.quantity == BoundViolation::Quantity::q);
}

TEST_CASE("verify_bounds argument errors") {
  const WaveProfile& p = pair_front();
  const Bounds b{0.5, 1.0, 1};
  CHECK_THROWS_AS(verify_bounds(p, vec({1}), b, 0.0), DimensionError);
  CHECK_THROWS_AS(verify_bounds(p, vec({1, 1}), b, -1.0), PreconditionError);
  CHECK_THROWS_AS(verify_bounds(p, vec({1, 0}), b, 0.0), ValidationError);
}

TEST_CASE("containment oracle brackets the tangency level") {
  TwoSpeciesParams p;
  const double l2 = tangent_lambda2(p).lambda2;
  CHECK(containment_oracle(l2, p, 10000, 1).contained);
  CHECK(containment_oracle(0.5 * l2, p, 10000, 1).contained);
  const ContainmentResult out = containment_oracle(1.001 * l2, p, 10000, 1);
  CHECK(!out.contained);
  REQUIRE(out.witness);
  CHECK(out.witness->h < 0.0);
  CHECK(out.witness->h == Approx(combined_kinetics(out.witness->u, out.witness->v, p)));
  CHECK_THROWS_AS(containment_oracle(0.0, p, 10, 1), PreconditionError);
  CHECK_THROWS_AS(containment_oracle(0.5, p, 0, 1), PreconditionError);
}

TEST_CASE("containment oracle is deterministic for a fixed seed") {
  TwoSpeciesParams p;
  const auto a = containment_oracle(0.7, p, 1000, 5);
  const auto b = containment_oracle(0.7, p, 1000, 5);
  REQUIRE(a.witness);
  CHECK(a.witness->u == b.witness->u);
  CHECK(a.witness->v == b.witness->v);
}

TEST_CASE("property: sampled supremum matches lambda2") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    TwoSpeciesParams p;
    p.a1 = uniform(rng, 1.1, 5.0);
    p.a2 = uniform(rng, 1.1, 5.0);
    p.d = uniform(rng, 0.1, 10.0);
    p.k = uniform(rng, 0.1, 10.0);
    p.alpha = uniform(rng, 0.1, 10.0);
    p.beta = uniform(rng, 0.1, 10.0);
    const double l2 = tangent_lambda2(p).lambda2;
    const double sup = containment_sup(p, 10000, 200 + trial);
    CHECK(std::abs(sup - l2) <= 1e-4 * std::max(1.0, l2));
  }
}

TEST_CASE("compare_bounds on the symmetric example") {
  TwoSpeciesParams p;
  const BoundComparison c = compare_bounds(p);
  CHECK(c.baseline == Approx(0.5));
  CHECK(c.improved == Approx(2.0 / 3));
  CHECK(c.polyhedral == Approx(0.5));
  CHECK(c.ratio == Approx(4.0 / 3));
}

TEST_CASE("property: compare_bounds never reports an inconsistency") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 300; ++trial) {
    TwoSpeciesParams p;
    p.a1 = uniform(rng, 1.01, 5.0);
    p.a2 = uniform(rng, 1.01, 5.0);
    p.d = uniform(rng, 0.1, 10.0);
    p.k = uniform(rng, 0.1, 10.0);
    p.alpha = uniform(rng, 0.1, 10.0);
    p.beta = uniform(rng, 0.1, 10.0);
    for (auto rule : {Composition::diffusion_scaled, Composition::reweighted}) {
      const BoundComparison c = compare_bounds(p, rule);
      CHECK(c.improved >= c.polyhedral * (1 - 1e-12));
      CHECK(c.ratio == Approx(c.improved / c.baseline));
    }
  }
}

}  // TEST_SUITE
