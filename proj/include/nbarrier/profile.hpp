#pragma once

#include <Eigen/Dense>

namespace nbarrier {

/// Uniform grid x_j = -L + j h, j = 0..M, with M h = 2L.
class Grid {
 public:
  Grid(double half_length, double spacing);

  double half_length() const { return half_length_; }
  double spacing() const { return spacing_; }
  int intervals() const { return intervals_; }
  int size() const { return intervals_ + 1; }
  double x(int j) const { return -half_length_ + j * spacing_; }
  Eigen::VectorXd points() const;

 private:
  double half_length_;
  double spacing_;
  int intervals_;
};

/// Discretized traveling-wave solution. Column j of `values` holds the
/// species densities at x[j].
struct WaveProfile {
  Eigen::VectorXd x;
  Eigen::MatrixXd values;
  double theta = 0.0;
  Eigen::VectorXd e_minus;
  Eigen::VectorXd e_plus;
  double residual_norm = 0.0;

  int species() const { return static_cast<int>(values.rows()); }
  int points() const { return static_cast<int>(values.cols()); }
  double spacing() const { return points() > 1 ? x[1] - x[0] : 0.0; }
};

}  // namespace nbarrier
