#include "effrank/error.hpp"

namespace effrank {

ParseError::ParseError(std::size_t row, std::size_t col, const std::string& what)
    : Error(ErrorKind::Usage,
            "parse error at row " + std::to_string(row) +
                (col > 0 ? ", column " + std::to_string(col) : std::string()) + ": " + what),
      row_(row),
      col_(col) {}

}  // namespace effrank
