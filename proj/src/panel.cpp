#include "effrank/panel.hpp"

#include "effrank/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace effrank {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  for (;;) {
    const auto comma = line.find(',', begin);
    out.push_back(trim(line.substr(begin, comma - begin)));
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t begin = 0;
  while (begin < text.size()) {
    auto nl = text.find('\n', begin);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(begin, nl - begin));
    begin = nl + 1;
  }
  // Trailing blank lines are not data.
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

}  // namespace

std::vector<std::string> default_names(Eigen::Index n) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) names.push_back("c" + std::to_string(j));
  return names;
}

Panel::Panel(Eigen::MatrixXd values, std::vector<std::string> names, long start_index)
    : values_(std::move(values)), names_(std::move(names)), start_index_(start_index) {
  if (values_.rows() < 1 || values_.cols() < 1)
    throw InvalidArgument("panel must have at least one row and one column");
  if (static_cast<Eigen::Index>(names_.size()) != values_.cols())
    throw InvalidArgument("panel label count " + std::to_string(names_.size()) +
                          " does not match column count " + std::to_string(values_.cols()));
  if (!values_.allFinite()) throw InvalidArgument("panel contains non-finite entries");
}

Panel::Panel(Eigen::MatrixXd values, long start_index)
    : Panel(values, default_names(values.cols()), start_index) {}

Panel Panel::head(Eigen::Index count) const {
  if (count < 1 || count > num_times())
    throw InvalidArgument("head: count out of range");
  return Panel(values_.topRows(count), names_, start_index_);
}

Panel parse_csv(const std::string& text, bool has_header) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw EmptyInput("CSV input is empty");

  std::vector<std::string> names;
  std::size_t first_data = 0;
  if (has_header) {
    for (auto f : split_fields(lines[0])) names.emplace_back(f);
    first_data = 1;
  }
  if (lines.size() <= first_data) throw EmptyInput("CSV input has no data rows");

  const std::size_t rows = lines.size() - first_data;
  const std::size_t cols = has_header ? names.size() : split_fields(lines[first_data]).size();
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));

  for (std::size_t i = 0; i < rows; ++i) {
    const auto fields = split_fields(lines[first_data + i]);
    if (fields.size() != cols)
      throw ParseError(i + 1, 0,
                       "expected " + std::to_string(cols) + " fields, found " +
                           std::to_string(fields.size()));
    for (std::size_t j = 0; j < cols; ++j) {
      double v = 0.0;
      const auto f = fields[j];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v))
        throw ParseError(i + 1, j + 1, "non-numeric cell '" + std::string(f) + "'");
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  if (!has_header) names = default_names(static_cast<Eigen::Index>(cols));
  return Panel(std::move(values), std::move(names));
}

Panel load_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), has_header);
}

std::string format_csv(const Panel& panel) {
  std::string out;
  const auto& names = panel.names();
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (j) out += ',';
    out += names[j];
  }
  out += '\n';
  char cell[32];
  const auto& v = panel.values();
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      if (j) out += ',';
      std::snprintf(cell, sizeof cell, "%.17g", v(i, j));
      out += cell;
    }
    out += '\n';
  }
  return out;
}

void save_csv(const Panel& panel, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_csv(panel);
}

Panel center(const Panel& panel) {
  Eigen::MatrixXd v = panel.values();
  v.rowwise() -= v.colwise().mean();
  return Panel(std::move(v), panel.names(), panel.start_index());
}

Eigen::MatrixXd lag_matrix(const Eigen::MatrixXd& y, int d) {
  if (d <= 0) throw InvalidArgument("lag order d must be positive");
  const Eigen::Index p = y.rows();
  const Eigen::Index T = y.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d * p, T);
  for (int i = 1; i <= d; ++i) {
    if (i >= T) break;
    out.block((i - 1) * p, i, p, T - i) = y.leftCols(T - i);
  }
  return out;
}

LagStack lag_stack(const Panel& y, int d) {
  if (d <= 0) throw InvalidArgument("lag order d must be positive");
  return {lag_matrix(y.series_major(), d).transpose(), d, static_cast<int>(y.num_series())};
}

}  // namespace effrank
