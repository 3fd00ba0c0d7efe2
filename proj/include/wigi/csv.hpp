#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace wigi::csv {

/// Splits one CSV line (RFC 4180 quoting, no embedded newlines).
/// Throws InputError on an unterminated quote.
std::vector<std::string> split(std::string_view line);

/// Quotes a field only when it contains a comma, quote or newline.
std::string quote(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Reads a CSV stream with a header row. Rows are numbered from 1 for the
/// first data line; blank lines are skipped.
class Reader {
 public:
  Reader(std::istream& in, std::string name);

  const std::vector<std::string>& header() const { return header_; }

  /// Throws RowError (row 0) unless the header equals `expected`.
  void require_header(const std::vector<std::string>& expected) const;

  /// Index of a named column; throws RowError if absent.
  std::size_t column(std::string_view name) const;

  /// Returns false at end of input. Throws RowError on a field-count mismatch.
  bool next(std::vector<std::string>& fields);
  std::size_t row() const { return row_; }
  const std::string& name() const { return name_; }

 private:
  std::istream& in_;
  std::string name_;
  std::vector<std::string> header_;
  std::size_t row_ = 0;
};

}  // namespace wigi::csv
