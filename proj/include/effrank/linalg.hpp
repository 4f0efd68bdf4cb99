#pragma once

#include <Eigen/Dense>

#include <vector>

namespace effrank::linalg {

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns match `values`
};

/// Eigendecomposition of a symmetric matrix with eigenvalues in descending
/// order. Each eigenvector is flipped so its largest-magnitude entry is
/// positive (first such entry on ties).
SymmetricEigen eigen_descending(const Eigen::MatrixXd& symmetric);

/// Flip the column so that its largest-magnitude entry is positive.
void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v);

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m);
double spectral_norm(const Eigen::MatrixXd& m);

/// Count of singular values strictly above rel_tol * sigma_max (0 for a zero matrix).
int numerical_rank(const Eigen::VectorXd& singular_values_desc, double rel_tol);

/// ||M'M - I||_F.
double orthonormality_error(const Eigen::MatrixXd& m);

/// Spectral radius of the VAR companion matrix built from lag blocks.
double companion_spectral_radius(const std::vector<Eigen::MatrixXd>& lag_blocks);

}  // namespace effrank::linalg
