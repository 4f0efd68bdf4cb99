#pragma once

#include <Eigen/Dense>

namespace effrank {

/// Inner proximal-gradient solver settings shared by the A- and Phi-steps.
struct ProxConfig {
  int max_inner_iter = 2000;
  double inner_tol = 1e-10;  // relative Frobenius change between iterates
  double step_scale = 1.0;   // multiplies the 1/L step

  void validate() const;
};

/// sign(x) * max(|x| - lambda, 0).
double soft_threshold(double x, double lambda);
Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& m, double lambda);

/// Singular-value soft-thresholding: the proximal map of lambda * ||.||_*.
Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double lambda);

/// Nuclear norm (sum of singular values).
double nuclear_norm(const Eigen::MatrixXd& m);

/// 1/L for the loss (1/2T)||R - M design||_F^2, where L = sigma_max(design)^2 / T
/// and T is the number of columns of `design`.
double lipschitz_step(const Eigen::MatrixXd& design);

}  // namespace effrank
