#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace effrank {

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorKind {
  Usage,     // bad input data or arguments (exit 2)
  Numerical  // the math failed on valid-looking input (exit 3)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

/// CSV parse failure. Row and column are 1-based positions in the data body
/// (the header row, if any, is not counted); column is 0 for row-level errors.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t col, const std::string& what);
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

class DegenerateSeries : public Error {
 public:
  explicit DegenerateSeries(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class DegenerateDesign : public Error {
 public:
  explicit DegenerateDesign(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class DegenerateInput : public Error {
 public:
  explicit DegenerateInput(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class DegenerateTarget : public Error {
 public:
  explicit DegenerateTarget(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class StationarityFailure : public Error {
 public:
  explicit StationarityFailure(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class EmptyResult : public Error {
 public:
  explicit EmptyResult(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// Raised when a solver invariant (objective monotonicity) is broken. Always a bug.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

}  // namespace effrank
