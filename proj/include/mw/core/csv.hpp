#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mw::csv {

// RFC 4180 reader over an in-memory copy of the file. Quoted fields may
// contain separators, doubled quotes and line breaks.
class Reader {
 public:
  explicit Reader(std::string content);

  // Throws IoError when the file cannot be read, FormatError when it has no
  // header line.
  static Reader open(const std::filesystem::path& path);

  [[nodiscard]] const std::vector<std::string>& header() const { return header_; }

  // Column position by name, if present.
  [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;

  // Reads the next data row. Returns false at end of input. Throws
  // FormatError for an unterminated quoted field.
  bool next(std::vector<std::string>& fields);

  // 1-based index of the last data row returned by next().
  [[nodiscard]] std::size_t row_number() const { return row_; }

 private:
  bool read_record(std::vector<std::string>& fields);

  std::string content_;
  std::size_t pos_ = 0;
  std::size_t row_ = 0;
  std::vector<std::string> header_;
};

[[nodiscard]] std::string escape(std::string_view field);
void write_row(std::ostream& out, std::span<const std::string> fields);
void write_row(std::ostream& out, std::initializer_list<std::string> fields);

// Whole-string numeric parsing; surrounding whitespace is not accepted.
[[nodiscard]] std::optional<std::int64_t> parse_int(std::string_view text);
[[nodiscard]] std::optional<double> parse_double(std::string_view text);

// Shortest representation that parses back to the same double.
[[nodiscard]] std::string format_exact(double value);
// Six significant digits, '.' separator, independent of locale.
[[nodiscard]] std::string format_sig6(double value);

}  // namespace mw::csv
