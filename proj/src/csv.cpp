#include "ecomplex/csv.hpp"

#include <charconv>
#include <cmath>

#include "ecomplex/errors.hpp"

namespace ecomplex::csv {

Reader::Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

void Reader::fail(const std::string& message) const {
  throw DataError(source_ + ": " + message, line_);
}

bool Reader::read_record(std::vector<std::string>& out) {
  out.clear();
  std::string line;
  if (!std::getline(in_, line)) return false;
  ++physical_line_;
  line_ = physical_line_;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (quoted) {
        // Embedded newline inside a quoted field.
        std::string more;
        if (!std::getline(in_, more)) fail("unterminated quoted field");
        ++physical_line_;
        field += '\n';
        line = std::move(more);
        i = 0;
        continue;
      }
      break;
    }
    char ch = line[i++];
    if (quoted) {
      if (ch == '"') {
        if (i < line.size() && line[i] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && field.empty()) {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r' && i == line.size()) {
      // CRLF line ending
    } else {
      field += ch;
    }
  }
  out.push_back(std::move(field));
  return true;
}

void Reader::expect_header(std::initializer_list<std::string_view> columns) {
  if (!read_record(header_)) fail("empty file (missing header row)");
  if (!header_.empty() && header_[0].starts_with("\xEF\xBB\xBF")) header_[0].erase(0, 3);
  bool ok = header_.size() == columns.size();
  std::size_t k = 0;
  for (auto col : columns) {
    if (ok && header_[k] != col) ok = false;
    ++k;
  }
  if (!ok) {
    std::string expected, got;
    for (auto col : columns) expected += (expected.empty() ? "" : ",") + std::string(col);
    for (const auto& col : header_) got += (got.empty() ? "" : ",") + col;
    fail("schema mismatch: expected header '" + expected + "', got '" + got + "'");
  }
}

bool Reader::next() {
  while (read_record(fields_)) {
    if (fields_.size() == 1 && fields_[0].empty()) continue;
    if (!header_.empty() && fields_.size() != header_.size()) {
      fail("expected " + std::to_string(header_.size()) + " fields, got " +
           std::to_string(fields_.size()));
    }
    return true;
  }
  return false;
}

std::string Reader::text(std::size_t i) const {
  const auto& f = field(i);
  if (f.empty()) fail("empty value in column '" + header_.at(i) + "'");
  return f;
}

std::optional<double> Reader::optional_number(std::size_t i) const {
  const auto& f = field(i);
  if (f.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
    fail("invalid number '" + f + "' in column '" + header_.at(i) + "'");
  }
  return v;
}

double Reader::number(std::size_t i) const {
  auto v = optional_number(i);
  if (!v) fail("missing value in column '" + header_.at(i) + "'");
  return *v;
}

long long Reader::integer(std::size_t i) const {
  const auto& f = field(i);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
    fail("invalid integer '" + f + "' in column '" + header_.at(i) + "'");
  }
  return v;
}

std::optional<bool> Reader::optional_boolean(std::size_t i) const {
  const auto& f = field(i);
  if (f.empty()) return std::nullopt;
  if (f == "1" || f == "true" || f == "TRUE") return true;
  if (f == "0" || f == "false" || f == "FALSE") return false;
  fail("invalid boolean '" + f + "' in column '" + header_.at(i) + "'");
}

bool Reader::boolean(std::size_t i) const {
  auto v = optional_boolean(i);
  if (!v) fail("missing value in column '" + header_.at(i) + "'");
  return *v;
}

std::string format_double(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (auto f : fields) {
    if (!first) out << ',';
    out << escape(f);
    first = false;
  }
  out << '\n';
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace ecomplex::csv
