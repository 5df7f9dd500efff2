#pragma once

#include <array>

#include "nbarrier/model.hpp"

namespace nbarrier {

/// Which diffusion rates enter the min/max ratio of the [H2] inequality.
enum class DiffusionRange { all_four, first_three };

enum class Verdict { certified_nonexistent, inconclusive };

const char* to_string(Verdict v);

/// Outcome of the four-species nonexistence test. The reduced growth rates
/// sigma_tilde_i = sigma_i - c_i4 sigma_4 / c_44 must be positive ([H1]),
/// and the three-species lower bound on sum_i c_4i u_i must reach sigma_4
/// ([H2]).
struct NonexistenceCertificate {
  bool h1_holds = false;
  std::array<double, 3> sigma_tilde{};
  bool h2_holds = false;
  double h2_lhs = 0.0;  // 0 when [H1] fails
  double h2_rhs = 0.0;  // sigma_4
  std::array<double, 3> alpha_star{};
  Verdict verdict = Verdict::inconclusive;
};

NonexistenceCertificate check_nonexistence(
    const LVSystem& sys, DiffusionRange range = DiffusionRange::all_four);

/// Same test with sigma_4 replaced by the given value (which may be any
/// nonnegative number, so the search below can start from 0).
NonexistenceCertificate certificate_at(const LVSystem& sys, double sigma4,
                                       DiffusionRange range = DiffusionRange::all_four);

/// Three-species system with growth rates sigma_tilde and the upper-left 3x3
/// block of c. Requires [H1] at sigma_4.
LVSystem reduced_system(const LVSystem& sys, double sigma4);

/// Largest sigma_4 for which the certificate holds, by bisection to tol.
/// Returns 0 if there is none.
double sigma4_threshold(const LVSystem& sys,
                        DiffusionRange range = DiffusionRange::all_four,
                        double tol = 1e-9);

}  // namespace nbarrier
