#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace effrank {

/// A T x n multivariate time series: rows are time points, columns are series.
///
/// Time is 1-based in documentation (t = 1..T) and 0-based in storage, so
/// observation t lives in row t-1. Panels are immutable after construction.
class Panel {
 public:
  Panel(Eigen::MatrixXd values, std::vector<std::string> names, long start_index = 1);
  /// Labels default to c0..c{n-1}.
  explicit Panel(Eigen::MatrixXd values, long start_index = 1);

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  long start_index() const noexcept { return start_index_; }

  Eigen::Index num_times() const noexcept { return values_.rows(); }
  Eigen::Index num_series() const noexcept { return values_.cols(); }

  /// Series-major view (n x T), the orientation used by the estimators.
  Eigen::MatrixXd series_major() const { return values_.transpose(); }

  /// The first `count` time points.
  Panel head(Eigen::Index count) const;

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> names_;
  long start_index_;
};

/// Row t (1-based) holds (y_{t-1}', ..., y_{t-d}')'; pre-sample lags are zero.
struct LagStack {
  Eigen::MatrixXd matrix;  // T x (d*p)
  int d = 0;
  int p = 0;
};

std::vector<std::string> default_names(Eigen::Index n);

Panel load_csv(const std::filesystem::path& path, bool has_header);
Panel parse_csv(const std::string& text, bool has_header);

/// Writes a header row of labels followed by values at 17 significant digits.
void save_csv(const Panel& panel, const std::filesystem::path& path);
std::string format_csv(const Panel& panel);

Panel center(const Panel& panel);

LagStack lag_stack(const Panel& y, int d);
/// Same layout as lag_stack but series-major: a (d*p) x T matrix whose column
/// t-1 is P_{t-1}. Accepts a p x T matrix directly.
Eigen::MatrixXd lag_matrix(const Eigen::MatrixXd& series_major, int d);

}  // namespace effrank
