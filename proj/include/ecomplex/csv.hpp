#pragma once

// Minimal RFC-4180-style CSV reading and locale-independent number output.

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ecomplex::csv {

class Reader {
 public:
  Reader(std::istream& in, std::string source);

  // Reads the header row and checks it matches `columns` exactly.
  void expect_header(std::initializer_list<std::string_view> columns);
  const std::vector<std::string>& header() const noexcept { return header_; }

  // Advances to the next non-blank record. Returns false at end of input.
  bool next();

  std::size_t line() const noexcept { return line_; }
  std::size_t size() const noexcept { return fields_.size(); }
  const std::string& field(std::size_t i) const { return fields_.at(i); }

  // Field accessors throw DataError tagged with the current line.
  std::string text(std::size_t i) const;
  double number(std::size_t i) const;
  std::optional<double> optional_number(std::size_t i) const;
  long long integer(std::size_t i) const;
  bool boolean(std::size_t i) const;
  std::optional<bool> optional_boolean(std::size_t i) const;

  [[noreturn]] void fail(const std::string& message) const;

 private:
  bool read_record(std::vector<std::string>& out);

  std::istream& in_;
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::string> fields_;
  std::size_t line_ = 0;
  std::size_t physical_line_ = 0;
};

// 12 significant digits, '.' decimal separator, no locale dependence.
std::string format_double(double value);

// Quotes the field when it contains a separator, quote or newline.
std::string escape(std::string_view field);

void write_row(std::ostream& out, std::initializer_list<std::string_view> fields);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace ecomplex::csv
