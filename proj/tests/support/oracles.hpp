#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's solvers; the point is to check them by a different route.

#include "effrank/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace oracle {

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, effrank::Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

/// Cyclic Jacobi rotations on a symmetric matrix. Eigenvalues descending.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> jacobi_eigen(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) > a(y, y); });
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return {values, vectors};
}

/// Singular values from the Jacobi eigenvalues of M'M (descending).
inline Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  auto [values, vectors] = jacobi_eigen(m.transpose() * m);
  (void)vectors;
  return values.cwiseMax(0.0).cwiseSqrt();
}

/// Largest singular value by power iteration on M'M.
inline double power_sigma_max(const Eigen::MatrixXd& m, int iters = 5000) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.cols()).normalized();
  double sigma = 0.0;
  for (int i = 0; i < iters; ++i) {
    Eigen::VectorXd w = m.transpose() * (m * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double next = std::sqrt(norm);
    if (std::abs(next - sigma) < 1e-15 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return (m * v).norm();
}

/// Lasso for one response row: min (1/2T)||r - phi P||^2 + lambda ||phi||_1 by
/// cyclic coordinate descent on raw data.
inline Eigen::RowVectorXd lasso_cd(const Eigen::RowVectorXd& r, const Eigen::MatrixXd& P, double lambda,
                                   int sweeps = 20000) {
  const double T = static_cast<double>(P.cols());
  Eigen::RowVectorXd phi = Eigen::RowVectorXd::Zero(P.rows());
  Eigen::RowVectorXd resid = r;
  for (int s = 0; s < sweeps; ++s) {
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < P.rows(); ++j) {
      const double norm2 = P.row(j).squaredNorm() / T;
      if (norm2 == 0.0) continue;
      const double rho = resid.dot(P.row(j)) / T + norm2 * phi(j);
      const double updated = (rho > lambda ? rho - lambda : (rho < -lambda ? rho + lambda : 0.0)) / norm2;
      const double delta = updated - phi(j);
      if (delta != 0.0) {
        resid -= delta * P.row(j);
        phi(j) = updated;
      }
      max_delta = std::max(max_delta, std::abs(delta));
    }
    if (max_delta < 1e-14) break;
  }
  return phi;
}

/// Singular-value soft-thresholding via an SVD from Jacobi rotations on M'M.
inline Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double lambda) {
  auto [values, V] = jacobi_eigen(m.transpose() * m);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double sigma = std::sqrt(std::max(values(i), 0.0));
    if (sigma <= lambda || sigma == 0.0) continue;
    const Eigen::VectorXd u = m * V.col(i) / sigma;
    out += (sigma - lambda) * u * V.col(i).transpose();
  }
  return out;
}

/// Proximal gradient on the raw residual (no sufficient statistics), run long.
inline Eigen::MatrixXd nuclear_regression(const Eigen::MatrixXd& R, const Eigen::MatrixXd& Z, double lambda,
                                          int iters) {
  const double T = static_cast<double>(Z.cols());
  const double sigma = power_sigma_max(Z);
  const double step = T / (sigma * sigma);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(R.rows(), Z.rows());
  for (int i = 0; i < iters; ++i) {
    const Eigen::MatrixXd grad = -(R - A * Z) * Z.transpose() / T;
    A = svt(A - step * grad, step * lambda);
  }
  return A;
}

}  // namespace oracle
