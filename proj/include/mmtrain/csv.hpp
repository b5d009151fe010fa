#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mmtrain {

/// Shortest round-trippable-enough text for a double ("%.10g"), with
/// "inf", "-inf" and "nan" spelled out.
std::string format_number(double v);

/// RFC 4180 rows with LF endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(std::string_view text) { out_ << "# " << text << '\n'; }
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

}  // namespace mmtrain
