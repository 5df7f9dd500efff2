#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "nbarrier/profile.hpp"

namespace nbarrier {

/// Lotka-Volterra competition system of n species in traveling-wave form:
///
///   d_i u_i'' + theta u_i' + u_i^{m_i} (sigma_i - sum_j c_ij u_j) = 0.
///
/// All rates are validated on construction; instances are immutable.
class LVSystem {
 public:
  LVSystem(Eigen::VectorXd d, Eigen::VectorXd sigma, Eigen::MatrixXd c,
           Eigen::VectorXd m, double theta);
  /// Kinetic exponents default to 1.
  LVSystem(Eigen::VectorXd d, Eigen::VectorXd sigma, Eigen::MatrixXd c,
           double theta = 0.0);

  int n() const { return static_cast<int>(sigma_.size()); }
  const Eigen::VectorXd& d() const { return d_; }
  const Eigen::VectorXd& sigma() const { return sigma_; }
  const Eigen::MatrixXd& c() const { return c_; }
  const Eigen::VectorXd& m() const { return m_; }
  double theta() const { return theta_; }

  LVSystem with_theta(double theta) const;
  LVSystem with_sigma(Eigen::VectorXd sigma) const;

  /// Per-capita growth f_i(u) = sigma_i - sum_j c_ij u_j.
  Eigen::VectorXd growth(const Eigen::VectorXd& u) const;

 private:
  Eigen::VectorXd d_;
  Eigen::VectorXd sigma_;
  Eigen::MatrixXd c_;
  Eigen::VectorXd m_;
  double theta_;
};

/// Nonnegative vector of species densities.
class DensityVector {
 public:
  explicit DensityVector(Eigen::VectorXd u);

  const Eigen::VectorXd& values() const { return u_; }
  int size() const { return static_cast<int>(u_.size()); }
  double operator[](int i) const { return u_[i]; }

 private:
  Eigen::VectorXd u_;
};

struct Equilibrium {
  DensityVector point;
  std::vector<int> support;  // indices of nonzero species, ascending
};

struct EquilibriumSet {
  std::vector<Equilibrium> points;
  /// One entry per support subset whose linear system was singular.
  std::vector<std::string> diagnostics;

  /// True if some point lies within tol (max norm) of u.
  bool contains(const Eigen::VectorXd& u, double tol) const;
};

/// g_i = u_i^{m_i} (sigma_i - sum_j c_ij u_j).
Eigen::VectorXd evaluate_kinetics(const LVSystem& sys, const DensityVector& u);

/// All nonnegative equilibria, found by solving the linear system on each
/// of the 2^n support subsets. Requires n <= 8.
EquilibriumSet enumerate_equilibria(const LVSystem& sys);

struct Residual {
  Eigen::MatrixXd values;  // n x (interior points)
  double max_abs = 0.0;
};

/// Central-difference residual of the traveling-wave equations at the
/// interior grid points of a uniform profile.
Residual residual(const LVSystem& sys, const WaveProfile& profile);

namespace detail {
// Kinetics without the nonnegativity check; m_i == 1 uses u_i directly so
// slightly negative iterates stay finite.
Eigen::VectorXd kinetics(const LVSystem& sys, const Eigen::VectorXd& u);
}  // namespace detail

}  // namespace nbarrier
