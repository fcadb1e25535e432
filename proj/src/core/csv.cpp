#include "mw/core/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mw/core/error.hpp"

namespace mw::csv {

Reader::Reader(std::string content) : content_(std::move(content)) {
  if (content_.size() >= 3 && content_.compare(0, 3, "\xEF\xBB\xBF") == 0) pos_ = 3;
  if (!read_record(header_)) throw FormatError("missing header line");
  row_ = 0;
}

Reader Reader::open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  try {
    return Reader(std::move(buffer).str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::optional<std::size_t> Reader::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

bool Reader::next(std::vector<std::string>& fields) {
  if (!read_record(fields)) return false;
  ++row_;
  return true;
}

bool Reader::read_record(std::vector<std::string>& fields) {
  fields.clear();
  // Blank lines between records are skipped.
  while (pos_ < content_.size() && (content_[pos_] == '\n' || content_[pos_] == '\r')) ++pos_;
  if (pos_ >= content_.size()) return false;

  std::string field;
  bool quoted = false;
  while (pos_ < content_.size()) {
    const char c = content_[pos_++];
    if (quoted) {
      if (c == '"') {
        if (pos_ < content_.size() && content_[pos_] == '"') {
          field.push_back('"');
          ++pos_;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (quoted) {
    ++row_;
    throw FormatError("unterminated quoted field in row " + std::to_string(row_));
  }
  fields.push_back(std::move(field));
  return true;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.put(',');
    out << escape(fields[i]);
  }
  out.put('\n');
}

void write_row(std::ostream& out, std::initializer_list<std::string> fields) {
  write_row(out, std::span<const std::string>(fields.begin(), fields.size()));
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  std::int64_t value = 0;
  if (!text.empty() && text.front() == '+') return std::nullopt;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view text) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

std::string format_exact(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_sig6(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
  return std::string(buf, ptr);
}

}  // namespace mw::csv
