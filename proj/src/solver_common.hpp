#pragma once

#include "effrank/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <string>

namespace effrank::detail {

/// ||next - prev||_F / ||next||_F, with 0/0 read as no change.
inline double relative_change(const Eigen::MatrixXd& next, const Eigen::MatrixXd& prev) {
  const double change = (next - prev).norm();
  if (change == 0.0) return 0.0;
  const double scale = next.norm();
  return scale > 0.0 ? change / scale : change / prev.norm();
}

/// Bug sentinel for block-coordinate descent: exact block minimization can
/// never raise the objective beyond roundoff.
class MonotoneGuard {
 public:
  MonotoneGuard(double initial, double slack) : last_(initial), slack_(slack) {}

  void record(double value, int iteration) {
    if (!std::isfinite(value)) throw NumericalFailure("objective became non-finite");
    if (value > last_ + slack_) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "objective rose from %.17g to %.17g at outer iteration %d",
                    last_, value, iteration);
      throw InternalError(buf);
    }
    last_ = value;
  }

 private:
  double last_;
  double slack_;
};

}  // namespace effrank::detail
