#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace kinsep::cli {

/// Shortest round-trip-safe text for 17 significant digits, locale independent.
std::string format_double(double v);

/// Comma-separated rows with LF endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(std::initializer_list<std::string_view> names);
  void header(const std::vector<std::string>& names);
  CsvWriter& field(double v);
  CsvWriter& field(long long v);
  CsvWriter& field(std::size_t v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(std::string_view text);
  CsvWriter& field(const char* text) { return field(std::string_view(text)); }
  CsvWriter& field(const std::string& text) { return field(std::string_view(text)); }
  void end_row();

 private:
  void separator();
  std::ostream& out_;
  bool fresh_ = true;
};

/// Mode string safe in file names: '+' -> 'p', '-' -> 'm'.
std::string mode_tag(const std::string& mode);

}  // namespace kinsep::cli
