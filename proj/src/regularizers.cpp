#include "effrank/regularizers.hpp"

#include "effrank/error.hpp"
#include "effrank/linalg.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace effrank {

void ProxConfig::validate() const {
  if (max_inner_iter < 1) throw InvalidArgument("max_inner_iter must be positive");
  if (!(inner_tol > 0.0)) throw InvalidArgument("inner_tol must be positive");
  if (!(step_scale > 0.0 && step_scale <= 1.0)) throw InvalidArgument("step_scale must lie in (0, 1]");
}

double soft_threshold(double x, double lambda) {
  if (x > lambda) return x - lambda;
  if (x < -lambda) return x + lambda;
  return 0.0;
}

Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& m, double lambda) {
  return m.unaryExpr([lambda](double v) { return soft_threshold(v, lambda); });
}

Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double lambda) {
  if (m.size() == 0) return m;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd shrunk = (svd.singularValues().array() - lambda).cwiseMax(0.0);
  Eigen::Index keep = 0;
  while (keep < shrunk.size() && shrunk(keep) > 0.0) ++keep;
  if (keep == 0) return Eigen::MatrixXd::Zero(m.rows(), m.cols());
  return svd.matrixU().leftCols(keep) * shrunk.head(keep).asDiagonal() *
         svd.matrixV().leftCols(keep).transpose();
}

double nuclear_norm(const Eigen::MatrixXd& m) { return linalg::singular_values(m).sum(); }

double lipschitz_step(const Eigen::MatrixXd& design) {
  const double sigma = linalg::spectral_norm(design);
  if (!(sigma > 0.0)) throw DegenerateDesign("design matrix is zero");
  const double T = static_cast<double>(design.cols());
  return T / (sigma * sigma);
}

}  // namespace effrank
