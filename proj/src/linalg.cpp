#include "effrank/linalg.hpp"

#include "effrank/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace effrank::linalg {

void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  if (v.size() == 0) return;
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > best) {
      best = std::abs(v(i));
      arg = i;
    }
  }
  if (v(arg) < 0.0) v = -v;
}

SymmetricEigen eigen_descending(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver failed");
  const Eigen::Index n = symmetric.rows();
  SymmetricEigen out{solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
  for (Eigen::Index j = 0; j < n; ++j) canonicalize_sign(out.vectors.col(j));
  return out;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues();
}

double spectral_norm(const Eigen::MatrixXd& m) {
  const auto sv = singular_values(m);
  return sv.size() ? sv(0) : 0.0;
}

int numerical_rank(const Eigen::VectorXd& sv, double rel_tol) {
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  const double cutoff = rel_tol * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

double orthonormality_error(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return 0.0;
  return (m.transpose() * m - Eigen::MatrixXd::Identity(m.cols(), m.cols())).norm();
}

double companion_spectral_radius(const std::vector<Eigen::MatrixXd>& blocks) {
  if (blocks.empty()) return 0.0;
  const Eigen::Index p = blocks.front().rows();
  const Eigen::Index d = static_cast<Eigen::Index>(blocks.size());
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d * p, d * p);
  for (Eigen::Index i = 0; i < d; ++i) companion.block(0, i * p, p, p) = blocks[i];
  if (d > 1) companion.block(p, 0, (d - 1) * p, (d - 1) * p).setIdentity();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("companion eigensolver failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace effrank::linalg
