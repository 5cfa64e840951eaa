#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace ohmlab {

/// Shortest round-trip decimal; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

/// Minimal CSV emitter: a header row, then rows of preformatted cells.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> columns);

  void row(const std::vector<std::string>& cells);
  std::size_t columns() const { return columns_.size(); }

 private:
  std::ostream& out_;
  std::vector<std::string> columns_;
};

}  // namespace ohmlab
