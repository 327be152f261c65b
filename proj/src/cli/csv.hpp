#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gausep::cli {

// 17 significant digits, '.' decimal separator.
std::string format_double(double v);
std::string csv_escape(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);  // CRLF terminated

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& os_;
};

}  // namespace gausep::cli
