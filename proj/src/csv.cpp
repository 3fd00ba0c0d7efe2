#include "wigi/csv.hpp"

#include "wigi/errors.hpp"

namespace wigi::csv {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty() && !field_was_quoted) {
      quoted = true;
      field_was_quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw InputError("unterminated quoted field");
  out.push_back(std::move(field));
  return out;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << quote(fields[i]);
  }
  out << '\n';
}

Reader::Reader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {
  std::string line;
  if (!std::getline(in_, line)) throw RowError(name_, 0, "missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  // tolerate a UTF-8 byte order mark
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  header_ = split(line);
}

void Reader::require_header(const std::vector<std::string>& expected) const {
  if (header_ == expected) return;
  std::string want;
  for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
  throw RowError(name_, 0, "expected header '" + want + "'");
}

std::size_t Reader::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw RowError(name_, 0, "missing column '" + std::string(name) + "'");
}

bool Reader::next(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++row_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      fields = split(line);
    } catch (const InputError& e) {
      throw RowError(name_, row_, e.what());
    }
    if (fields.size() != header_.size()) {
      throw RowError(name_, row_,
                     "expected " + std::to_string(header_.size()) + " fields, got " +
                         std::to_string(fields.size()));
    }
    return true;
  }
  return false;
}

}  // namespace wigi::csv
