#include "wigi/wikitext.hpp"

#include <cctype>

namespace wigi::celebrity {

namespace {

bool starts_with_icase(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) != prefix[i]) return false;
  }
  return true;
}

std::size_t find_icase(std::string_view s, std::size_t pos, std::string_view needle) {
  for (std::size_t i = pos; i + needle.size() <= s.size(); ++i) {
    if (starts_with_icase(s, i, needle)) return i;
  }
  return std::string_view::npos;
}

/// Index one past the "}}" closing the template opened at `pos`, or npos.
std::size_t template_end(std::string_view s, std::size_t pos) {
  int depth = 0;
  std::size_t i = pos;
  while (i + 1 < s.size()) {
    if (s[i] == '{' && s[i + 1] == '{') {
      ++depth;
      i += 2;
    } else if (s[i] == '}' && s[i + 1] == '}') {
      --depth;
      i += 2;
      if (depth == 0) return i;
    } else {
      ++i;
    }
  }
  return std::string_view::npos;
}

/// Index of the "]]" closing the link opened at `pos`, or npos.
std::size_t link_close(std::string_view s, std::size_t pos) {
  int depth = 0;
  std::size_t i = pos;
  while (i + 1 < s.size()) {
    if (s[i] == '[' && s[i + 1] == '[') {
      ++depth;
      i += 2;
    } else if (s[i] == ']' && s[i + 1] == ']') {
      if (--depth == 0) return i;
      i += 2;
    } else {
      ++i;
    }
  }
  return std::string_view::npos;
}

/// Text after the last '|' that is not inside a nested link or template.
std::string_view link_label(std::string_view inner) {
  int depth = 0;
  std::size_t last_pipe = std::string_view::npos;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (i + 1 < inner.size() && ((inner[i] == '[' && inner[i + 1] == '[') ||
                                 (inner[i] == '{' && inner[i + 1] == '{'))) {
      ++depth;
      ++i;
    } else if (i + 1 < inner.size() && ((inner[i] == ']' && inner[i + 1] == ']') ||
                                        (inner[i] == '}' && inner[i + 1] == '}'))) {
      --depth;
      ++i;
    } else if (inner[i] == '|' && depth == 0) {
      last_pipe = i;
    }
  }
  return last_pipe == std::string_view::npos ? inner : inner.substr(last_pipe + 1);
}

void remove_markup(std::string_view s, std::string& out, bool& unbalanced) {
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 4, "<!--") == 0) {
      auto end = s.find("-->", i + 4);
      if (end == std::string_view::npos) {
        unbalanced = true;
        return;
      }
      i = end + 3;
    } else if (starts_with_icase(s, i, "<ref") &&
               (i + 4 >= s.size() || s[i + 4] == '>' || s[i + 4] == '/' ||
                std::isspace(static_cast<unsigned char>(s[i + 4])))) {
      auto tag_end = s.find('>', i);
      if (tag_end == std::string_view::npos) {
        unbalanced = true;
        return;
      }
      if (s[tag_end - 1] == '/') {
        i = tag_end + 1;
        continue;
      }
      auto close = find_icase(s, tag_end + 1, "</ref>");
      if (close == std::string_view::npos) {
        unbalanced = true;
        return;
      }
      i = close + 6;
    } else if (s.compare(i, 2, "{{") == 0) {
      auto end = template_end(s, i);
      if (end == std::string_view::npos) {
        unbalanced = true;
        return;
      }
      i = end;
    } else if (s.compare(i, 2, "[[") == 0) {
      auto close = link_close(s, i);
      if (close == std::string_view::npos) {
        out += s[i++];
        continue;
      }
      remove_markup(link_label(s.substr(i + 2, close - i - 2)), out, unbalanced);
      i = close + 2;
    } else {
      out += s[i++];
    }
  }
}

std::string drop_quote_runs(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '\'') {
      std::size_t j = i;
      while (j < s.size() && s[j] == '\'') ++j;
      if (j - i == 1) out += '\'';
      i = j;
    } else {
      out += s[i++];
    }
  }
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::string strip_once(std::string_view raw, bool& unbalanced) {
  std::string text;
  text.reserve(raw.size());
  remove_markup(raw, text, unbalanced);
  return collapse_whitespace(drop_quote_runs(text));
}

}  // namespace

StrippedText strip_wikitext(std::string_view raw) {
  StrippedText result;
  std::string current = strip_once(raw, result.unbalanced);
  // Removing markup can join fragments into new markup ("{''{"); iterate to a
  // fixed point. Passes never lengthen the text, so this terminates.
  while (true) {
    bool ignored = false;
    std::string next = strip_once(current, ignored);
    if (next == current) break;
    result.unbalanced = result.unbalanced || ignored;
    current = std::move(next);
  }
  result.text = std::move(current);
  return result;
}

}  // namespace wigi::celebrity
