#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>
#include <optional>
#include <random>

#include "nbarrier/model.hpp"

namespace testutil {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  Eigen::MatrixXd m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

// sigma = (1, 1), c = [[1, 2], [2, 1]]: strong competition, symmetric.
inline nbarrier::LVSystem bistable_pair(double theta = 0.0) {
  return nbarrier::LVSystem(vec({1, 1}), vec({1, 1}), mat({{1, 2}, {2, 1}}), theta);
}

inline nbarrier::LVSystem may_leonard(double mu1 = 2.0, double mu2 = 3.0) {
  return nbarrier::LVSystem(vec({1, 1, 1}), vec({1, 1, 1}),
                            mat({{1, mu1, mu2}, {mu2, 1, mu1}, {mu1, mu2, 1}}));
}

inline nbarrier::LVSystem lv4(double sigma4) {
  return nbarrier::LVSystem(vec({1, 1, 1, 1}), vec({1, 1, 1, sigma4}),
                            mat({{1, 2, 3, 1}, {3, 1, 2, 1}, {2, 3, 1, 1}, {1, 1, 1, 1}}));
}

inline nbarrier::LVSystem logistic(double theta = 0.0) {
  return nbarrier::LVSystem(vec({1}), vec({1}), mat({{1}}), theta);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random LV system with positive entries and a diagonally heavy matrix.
inline nbarrier::LVSystem random_system(std::mt19937_64& rng, int n) {
  Eigen::VectorXd d(n), sigma(n);
  Eigen::MatrixXd c(n, n);
  for (int i = 0; i < n; ++i) {
    d[i] = uniform(rng, 0.2, 5.0);
    sigma[i] = uniform(rng, 0.5, 1.5);
    for (int j = 0; j < n; ++j) c(i, j) = i == j ? uniform(rng, 1.0, 2.0) : uniform(rng, 0.2, 3.0);
  }
  return nbarrier::LVSystem(d, sigma, c);
}

// Newton on g(u) = u .* (sigma - C u) for unit exponents; nullopt if it
// does not converge.
inline std::optional<Eigen::VectorXd> polish_root(const nbarrier::LVSystem& sys,
                                                  Eigen::VectorXd u) {
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

}  // namespace testutil
