#pragma once

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace postcon {

/// Shortest scientific form with 17 significant digits; "inf", "-inf", "nan".
std::string format_double(double v);

/// Minimal CSV writer: header row first, `\n` line endings, doubles in
/// full-precision scientific notation.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);

  template <class... T>
  void row(const T&... fields) {
    if (sizeof...(T) != columns_) throw std::logic_error("CSV row has the wrong number of fields");
    bool first = true;
    ((put(first, fields), first = false), ...);
    out_ << '\n';
  }

  void comment(std::string_view text);

 private:
  template <class T>
  void put(bool first, const T& v) {
    if (!first) out_ << ',';
    if constexpr (std::is_floating_point_v<T>) {
      out_ << format_double(static_cast<double>(v));
    } else if constexpr (std::is_same_v<T, bool>) {
      out_ << (v ? "true" : "false");
    } else if constexpr (std::is_integral_v<T>) {
      out_ << v;
    } else {
      out_ << escape(std::string_view(v));
    }
  }
  static std::string escape(std::string_view s);

  std::ostream& out_;
  std::size_t columns_;
};

/// Splits one CSV line on commas (no quoting support needed for our output).
std::vector<std::string> split_csv_line(std::string_view line);

/// Strict parse of a double, accepting "inf"/"-inf"/"nan".
double parse_double(std::string_view text);

}  // namespace postcon
