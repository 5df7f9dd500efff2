#include "nbarrier/waves.hpp"

#include <cmath>
#include <sstream>

namespace nbarrier {
namespace {

constexpr double kEquilibriumTol = 1e-8;
constexpr double kNegativityTol = 1e-10;

// u^m and d(u^m)/du used inside the solver. For m = 1 this is linear and
// defined for slightly negative iterates; otherwise negative values are
// treated as zero density.
struct PowerTerm {
  double value;
  double slope;
};

PowerTerm power_term(double u, double m) {
  if (m == 1.0) return {u, 1.0};
  if (u <= 0.0) return {0.0, 0.0};
  const double p = std::pow(u, m);
  return {p, m * p / u};
}

class Discretization {
 public:
  Discretization(const LVSystem& sys, double h, double theta)
      : sys_(sys),
        n_(sys.n()),
        inv_h2_(1.0 / (h * h)),
        inv_2h_(1.0 / (2.0 * h)),
        theta_(theta) {}

  // Residual at interior columns 1..M-1, stored as n x (M-1).
  Eigen::MatrixXd residual(const Eigen::MatrixXd& u) const {
    const auto cols = u.cols();
    Eigen::MatrixXd f(n_, cols - 2);
    for (Eigen::Index j = 1; j < cols - 1; ++j) {
      const Eigen::VectorXd growth = sys_.growth(u.col(j));
      for (int i = 0; i < n_; ++i) {
        const double uxx = (u(i, j + 1) - 2.0 * u(i, j) + u(i, j - 1)) * inv_h2_;
        const double ux = (u(i, j + 1) - u(i, j - 1)) * inv_2h_;
        const double pw = power_term(u(i, j), sys_.m()[i]).value;
        f(i, j - 1) = sys_.d()[i] * uxx + theta_ * ux + pw * growth[i];
      }
    }
    return f;
  }

  Eigen::MatrixXd newton_step(const Eigen::MatrixXd& u, const Eigen::MatrixXd& f) const {
    const auto interior = u.cols() - 2;
    std::vector<Eigen::VectorXd> lower(interior), upper(interior), rhs(interior);
    std::vector<Eigen::MatrixXd> diag(interior);
    Eigen::VectorXd off_lo(n_), off_hi(n_);
    for (int i = 0; i < n_; ++i) {
      off_lo[i] = sys_.d()[i] * inv_h2_ - theta_ * inv_2h_;
      off_hi[i] = sys_.d()[i] * inv_h2_ + theta_ * inv_2h_;
    }
    for (Eigen::Index j = 0; j < interior; ++j) {
      const Eigen::VectorXd col = u.col(j + 1);
      const Eigen::VectorXd growth = sys_.growth(col);
      Eigen::MatrixXd block(n_, n_);
      for (int i = 0; i < n_; ++i) {
        const auto pt = power_term(col[i], sys_.m()[i]);
        for (int k = 0; k < n_; ++k) block(i, k) = -pt.value * sys_.c()(i, k);
        block(i, i) += pt.slope * growth[i] - 2.0 * sys_.d()[i] * inv_h2_;
      }
      diag[j] = std::move(block);
      lower[j] = off_lo;
      upper[j] = off_hi;
      rhs[j] = -f.col(j);
    }
    const auto x = solve_block_tridiagonal(lower, std::move(diag), upper, std::move(rhs));
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(n_, u.cols());
    for (Eigen::Index j = 0; j < interior; ++j) delta.col(j + 1) = x[j];
    return delta;
  }

 private:
  const LVSystem& sys_;
  int n_;
  double inv_h2_;
  double inv_2h_;
  double theta_;
};

double max_abs(const Eigen::MatrixXd& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

bool is_equilibrium(const LVSystem& sys, const Eigen::VectorXd& e) {
  if (e.size() != sys.n()) throw DimensionError("boundary state length must equal n");
  if ((e.array() < 0.0).any()) return false;
  if (sys.n() <= 8) return enumerate_equilibria(sys).contains(e, kEquilibriumTol);
  return detail::kinetics(sys, e).lpNorm<Eigen::Infinity>() <= kEquilibriumTol;
}

// Newton at a fixed speed; updates `profile` in place.
int newton_stage(const LVSystem& sys, WaveProfile& profile, double theta,
                 const SolverConfig& config, SolveDiagnostics& diag) {
  const Discretization disc(sys, profile.spacing(), theta);
  profile.theta = theta;
  Eigen::MatrixXd& u = profile.values;
  Eigen::MatrixXd f = disc.residual(u);
  double norm = max_abs(f);
  int iters = 0;

  for (;;) {
    if (norm <= config.newton_tol) {
      // Clamp round-off negatives and make sure the clamped profile still
      // meets the tolerance.
      const double lowest = u.minCoeff();
      if (lowest < -kNegativityTol) {
        std::ostringstream msg;
        msg << "converged profile has negative density " << lowest;
        profile.residual_norm = norm;
        throw ConvergenceError(msg.str(), profile, diag.iterations + iters, norm);
      }
      if (lowest < 0.0) {
        u = u.cwiseMax(0.0);
        f = disc.residual(u);
        norm = max_abs(f);
        if (norm > config.newton_tol) continue;
      }
      break;
    }
    if (diag.iterations + iters >= config.max_iters) {
      std::ostringstream msg;
      msg << "Newton did not converge in " << config.max_iters
          << " iterations (residual " << norm << ")";
      profile.residual_norm = norm;
      throw ConvergenceError(msg.str(), profile, diag.iterations + iters, norm);
    }

    diag.history.push_back(norm);
    const Eigen::MatrixXd delta = disc.newton_step(u, f);
    double step = 1.0;
    for (;;) {
      Eigen::MatrixXd trial = u + step * delta;
      Eigen::MatrixXd ft = disc.residual(trial);
      const double trial_norm = max_abs(ft);
      if (std::isfinite(trial_norm) && trial_norm < norm) {
        u = std::move(trial);
        f = std::move(ft);
        norm = trial_norm;
        break;
      }
      step *= config.damping;
      if (step < config.min_step) {
        std::ostringstream msg;
        msg << "line search stalled below step " << config.min_step
            << " (residual " << norm << ")";
        profile.residual_norm = norm;
        throw ConvergenceError(msg.str(), profile, diag.iterations + iters + 1, norm);
      }
    }
    ++iters;
  }
  profile.residual_norm = norm;
  return iters;
}

}  // namespace

Grid::Grid(double half_length, double spacing)
    : half_length_(half_length), spacing_(spacing), intervals_(0) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw ValidationError("grid half-length L must be positive");
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw ValidationError("grid spacing h must be positive");
  }
  const double m = 2.0 * half_length / spacing;
  const double rounded = std::round(m);
  if (std::abs(m - rounded) > 1e-9 * std::max(1.0, m)) {
    throw ValidationError("grid spacing h must divide 2L");
  }
  if (rounded < 4) throw ValidationError("grid needs at least 4 intervals");
  if (rounded > 1e8) throw ValidationError("grid has too many points");
  intervals_ = static_cast<int>(rounded);
}

Eigen::VectorXd Grid::points() const {
  Eigen::VectorXd x(size());
  for (int j = 0; j < size(); ++j) x[j] = this->x(j);
  return x;
}

void SolverConfig::validate() const {
  if (!(newton_tol > 0.0)) throw ValidationError("newton_tol must be positive");
  if (max_iters < 1) throw ValidationError("max_iters must be >= 1");
  if (!(damping > 0.0 && damping < 1.0)) throw ValidationError("damping must be in (0, 1)");
  if (!(min_step > 0.0 && min_step < 1.0)) throw ValidationError("min_step must be in (0, 1)");
  if (continuation_steps < 1) throw ValidationError("continuation_steps must be >= 1");
}

WaveProfile initial_guess(const Eigen::VectorXd& e_minus, const Eigen::VectorXd& e_plus,
                          const Grid& grid, double width, double theta) {
  if (!(width > 0.0)) throw PreconditionError("initial guess width must be positive");
  if (e_minus.size() != e_plus.size() || e_minus.size() < 1) {
    throw DimensionError("boundary states must be nonempty and of equal length");
  }
  WaveProfile p;
  p.x = grid.points();
  p.theta = theta;
  p.e_minus = e_minus;
  p.e_plus = e_plus;
  const int npts = grid.size();
  p.values.resize(e_minus.size(), npts);
  for (int j = 0; j < npts; ++j) {
    const double s = 1.0 / (1.0 + std::exp(-p.x[j] / width));
    p.values.col(j) = e_minus + (e_plus - e_minus) * s;
  }
  p.values.col(0) = e_minus;
  p.values.col(npts - 1) = e_plus;
  return p;
}

SolveResult newton_solve(const LVSystem& sys, WaveProfile start,
                         const SolverConfig& config) {
  config.validate();
  if (start.species() != sys.n()) throw DimensionError("profile species count must equal n");
  if (start.points() < 5) throw PreconditionError("profile needs at least 5 grid points");
  if (start.x.size() != start.points()) throw DimensionError("profile x length mismatch");

  SolveResult out;
  const double target = start.theta;
  out.profile = std::move(start);
  const int stages = config.continuation_steps;
  for (int k = 1; k <= stages; ++k) {
    const double theta = stages == 1 ? target : target * k / stages;
    out.diagnostics.iterations += newton_stage(sys, out.profile, theta, config, out.diagnostics);
  }
  out.diagnostics.final_norm = out.profile.residual_norm;
  return out;
}

SolveResult solve_wave(const LVSystem& sys, const Eigen::VectorXd& e_minus,
                       const Eigen::VectorXd& e_plus, const Grid& grid,
                       const SolverConfig& config, double width) {
  config.validate();
  if (!is_equilibrium(sys, e_minus)) {
    throw PreconditionError("e_minus is not a nonnegative equilibrium of the system");
  }
  if (!is_equilibrium(sys, e_plus)) {
    throw PreconditionError("e_plus is not a nonnegative equilibrium of the system");
  }
  WaveProfile start = initial_guess(e_minus, e_plus, grid, width, sys.theta());
  return newton_solve(sys, std::move(start), config);
}

SolveResult refine(const WaveProfile& profile, int factor, const LVSystem& sys,
                   const SolverConfig& config) {
  if (factor < 2) throw PreconditionError("refine factor must be >= 2");
  if (profile.points() < 2) throw PreconditionError("profile is empty");
  const int coarse = profile.points() - 1;
  const double x0 = profile.x[0];
  const double h = profile.spacing();
  const int fine = coarse * factor;

  WaveProfile p;
  p.theta = profile.theta;
  p.e_minus = profile.e_minus;
  p.e_plus = profile.e_plus;
  p.x.resize(fine + 1);
  p.values.resize(profile.species(), fine + 1);
  for (int j = 0; j <= fine; ++j) {
    const int base = std::min(j / factor, coarse - 1);
    const double w = static_cast<double>(j - base * factor) / factor;
    p.x[j] = x0 + j * (h / factor);
    p.values.col(j) = (1.0 - w) * profile.values.col(base) + w * profile.values.col(base + 1);
  }
  SolverConfig polish = config;
  polish.continuation_steps = 1;
  return newton_solve(sys, std::move(p), polish);
}

std::vector<Eigen::VectorXd> solve_block_tridiagonal(
    const std::vector<Eigen::VectorXd>& lower, std::vector<Eigen::MatrixXd> diag,
    const std::vector<Eigen::VectorXd>& upper, std::vector<Eigen::VectorXd> rhs) {
  const std::size_t m = diag.size();
  if (lower.size() != m || upper.size() != m || rhs.size() != m || m == 0) {
    throw DimensionError("block-tridiagonal operands must have matching lengths");
  }
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu(m);
  lu[0].compute(diag[0]);
  for (std::size_t j = 1; j < m; ++j) {
    // W = L_j D'_{j-1}^{-1}; D'_j = D_j - W U_{j-1}; r'_j = r_j - W r'_{j-1}.
    const Eigen::MatrixXd wj = lower[j].asDiagonal() * lu[j - 1].inverse();
    diag[j] -= wj * upper[j - 1].asDiagonal();
    rhs[j] -= wj * rhs[j - 1];
    lu[j].compute(diag[j]);
  }
  std::vector<Eigen::VectorXd> x(m);
  x[m - 1] = lu[m - 1].solve(rhs[m - 1]);
  for (std::size_t j = m - 1; j-- > 0;) {
    x[j] = lu[j].solve(rhs[j] - upper[j].cwiseProduct(x[j + 1]));
  }
  for (const auto& xj : x) {
    if (!xj.allFinite()) throw LinearSolveError("singular Jacobian in block-tridiagonal solve");
  }
  return x;
}

}  // namespace nbarrier
