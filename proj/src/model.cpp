#include "nbarrier/model.hpp"

#include <cmath>
#include <sstream>

#include "nbarrier/errors.hpp"

namespace nbarrier {
namespace {

constexpr double kDuplicateTol = 1e-9;
constexpr double kNegativeTol = 1e-12;
constexpr int kMaxEnumerationSpecies = 8;

void require_positive(const Eigen::VectorXd& v, const char* name) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      std::ostringstream msg;
      msg << name << "[" << i << "] must be positive and finite, got " << v[i];
      throw ValidationError(msg.str());
    }
  }
}

}  // namespace

LVSystem::LVSystem(Eigen::VectorXd d, Eigen::VectorXd sigma, Eigen::MatrixXd c,
                   Eigen::VectorXd m, double theta)
    : d_(std::move(d)),
      sigma_(std::move(sigma)),
      c_(std::move(c)),
      m_(std::move(m)),
      theta_(theta) {
  const auto n = sigma_.size();
  if (n < 1) throw ValidationError("species count n must be >= 1");
  if (d_.size() != n) throw DimensionError("d must have length n");
  if (m_.size() != n) throw DimensionError("m must have length n");
  if (c_.rows() != n || c_.cols() != n) throw DimensionError("c must be n x n");
  if (!std::isfinite(theta_)) throw ValidationError("theta must be finite");
  require_positive(d_, "d");
  require_positive(sigma_, "sigma");
  require_positive(m_, "m");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(c_(i, j) > 0.0) || !std::isfinite(c_(i, j))) {
        std::ostringstream msg;
        msg << "c[" << i << "][" << j << "] must be positive and finite, got "
            << c_(i, j);
        throw ValidationError(msg.str());
      }
    }
  }
}

LVSystem::LVSystem(Eigen::VectorXd d, Eigen::VectorXd sigma, Eigen::MatrixXd c,
                   double theta)
    : LVSystem(d, sigma, c, Eigen::VectorXd::Ones(sigma.size()), theta) {}

LVSystem LVSystem::with_theta(double theta) const {
  return LVSystem(d_, sigma_, c_, m_, theta);
}

LVSystem LVSystem::with_sigma(Eigen::VectorXd sigma) const {
  return LVSystem(d_, std::move(sigma), c_, m_, theta_);
}

Eigen::VectorXd LVSystem::growth(const Eigen::VectorXd& u) const {
  if (u.size() != n()) throw DimensionError("density vector length must equal n");
  return sigma_ - c_ * u;
}

DensityVector::DensityVector(Eigen::VectorXd u) : u_(std::move(u)) {
  for (Eigen::Index i = 0; i < u_.size(); ++i) {
    if (!(u_[i] >= 0.0)) {
      std::ostringstream msg;
      msg << "density u[" << i << "] must be nonnegative, got " << u_[i];
      throw ValidationError(msg.str());
    }
  }
}

bool EquilibriumSet::contains(const Eigen::VectorXd& u, double tol) const {
  for (const auto& e : points) {
    if (e.point.size() == u.size() &&
        (e.point.values() - u).lpNorm<Eigen::Infinity>() < tol) {
      return true;
    }
  }
  return false;
}

namespace detail {

Eigen::VectorXd kinetics(const LVSystem& sys, const Eigen::VectorXd& u) {
  Eigen::VectorXd g = sys.growth(u);
  for (int i = 0; i < sys.n(); ++i) {
    const double mi = sys.m()[i];
    g[i] *= (mi == 1.0) ? u[i] : std::pow(u[i], mi);
  }
  return g;
}

}  // namespace detail

Eigen::VectorXd evaluate_kinetics(const LVSystem& sys, const DensityVector& u) {
  if (u.size() != sys.n()) {
    throw DimensionError("density vector length must equal n");
  }
  return detail::kinetics(sys, u.values());
}

EquilibriumSet enumerate_equilibria(const LVSystem& sys) {
  const int n = sys.n();
  if (n > kMaxEnumerationSpecies) {
    throw PreconditionError("enumerate_equilibria supports n <= 8");
  }

  EquilibriumSet out;
  const unsigned subsets = 1u << n;
  for (unsigned mask = 0; mask < subsets; ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }

    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    if (!idx.empty()) {
      const auto k = static_cast<Eigen::Index>(idx.size());
      Eigen::MatrixXd a(k, k);
      Eigen::VectorXd rhs(k);
      for (Eigen::Index r = 0; r < k; ++r) {
        rhs[r] = sys.sigma()[idx[r]];
        for (Eigen::Index s = 0; s < k; ++s) a(r, s) = sys.c()(idx[r], idx[s]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (!lu.isInvertible()) {
        std::ostringstream msg;
        msg << "singular support {";
        for (std::size_t r = 0; r < idx.size(); ++r) {
          msg << (r ? "," : "") << idx[r] + 1;
        }
        msg << "} skipped";
        out.diagnostics.push_back(msg.str());
        continue;
      }
      const Eigen::VectorXd sol = lu.solve(rhs);
      bool admissible = sol.allFinite();
      for (Eigen::Index r = 0; admissible && r < k; ++r) {
        if (sol[r] < -kNegativeTol) admissible = false;
      }
      if (!admissible) continue;
      for (Eigen::Index r = 0; r < k; ++r) u[idx[r]] = std::max(sol[r], 0.0);
    }

    if (out.contains(u, kDuplicateTol)) continue;
    std::vector<int> support;
    for (int i = 0; i < n; ++i) {
      if (u[i] > 0.0) support.push_back(i);
    }
    out.points.push_back({DensityVector(u), std::move(support)});
  }
  return out;
}

Residual residual(const LVSystem& sys, const WaveProfile& profile) {
  const int n = sys.n();
  const int npts = profile.points();
  if (profile.species() != n) throw DimensionError("profile species count must equal n");
  if (profile.x.size() != npts) throw DimensionError("profile x length must match values");
  if (npts < 3) throw PreconditionError("residual needs at least 3 grid points");

  const double h = profile.x[1] - profile.x[0];
  if (!(h > 0.0)) throw UnsupportedGridError("grid must be strictly increasing");
  for (int j = 1; j < npts; ++j) {
    const double hj = profile.x[j] - profile.x[j - 1];
    if (std::abs(hj - h) > 1e-9 * h) {
      throw UnsupportedGridError("residual requires a uniform grid");
    }
  }

  Residual r;
  r.values.resize(n, npts - 2);
  const double inv_h2 = 1.0 / (h * h);
  const double inv_2h = 1.0 / (2.0 * h);
  for (int j = 1; j < npts - 1; ++j) {
    const Eigen::VectorXd g = detail::kinetics(sys, profile.values.col(j));
    for (int i = 0; i < n; ++i) {
      const double left = profile.values(i, j - 1);
      const double mid = profile.values(i, j);
      const double right = profile.values(i, j + 1);
      const double uxx = (right - 2.0 * mid + left) * inv_h2;
      const double ux = (right - left) * inv_2h;
      const double res = sys.d()[i] * uxx + profile.theta * ux + g[i];
      r.values(i, j - 1) = res;
      r.max_abs = std::max(r.max_abs, std::abs(res));
    }
  }
  return r;
}

}  // namespace nbarrier
