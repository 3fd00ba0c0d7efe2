#include "wigi/celebrity.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wigi/errors.hpp"
#include "wigi/wikitext.hpp"

namespace wigi::celebrity {

namespace {

std::string_view trim(std::string_view s) {
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return s;
}

std::u32string folded(std::string_view text) {
  auto cps = decode_utf8(text);
  for (auto& c : cps) c = fold_case(c);
  return cps;
}

}  // namespace

Lexicon Lexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lexicon '" + path + "'");
  Lexicon lex;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    auto text = trim(line);
    if (row == 1 && text.rfind("\xEF\xBB\xBF", 0) == 0) text.remove_prefix(3);
    if (text.empty() || text.front() == '#') continue;
    if (text.front() == '[') {
      if (text.back() != ']' || text.size() < 3) throw RowError(path, row, "malformed section header");
      std::string wiki(text.substr(1, text.size() - 2));
      if (lex.terms_for(wiki)) throw RowError(path, row, "duplicate section [" + wiki + "]");
      lex.terms.emplace_back(std::move(wiki), std::vector<std::string>{});
      continue;
    }
    if (lex.terms.empty()) throw RowError(path, row, "term outside of a [wiki] section");
    lex.terms.back().second.emplace_back(text);
  }
  for (const auto& [wiki, list] : lex.terms) {
    if (list.empty()) throw InputError(path + ": section [" + wiki + "] has no terms");
  }
  return lex;
}

const std::vector<std::string>* Lexicon::terms_for(std::string_view wiki) const {
  for (const auto& [w, list] : terms) {
    if (w == wiki) return &list;
  }
  return nullptr;
}

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = c < 0x80 ? 1 : (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : (c & 0xF8) == 0xF0 ? 4 : 0;
    if (len == 0 || i + len > text.size()) {
      out.push_back(U'\uFFFD');
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(U'\uFFFD');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

char32_t fold_case(char32_t c) {
  if (c < 0x80) return (c >= U'A' && c <= U'Z') ? c + 32 : c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  if (c >= 0x100 && c <= 0x137) return c | 1u;
  if (c >= 0x139 && c <= 0x148) return (c & 1u) ? c + 1 : c;
  if (c >= 0x14A && c <= 0x177) return c | 1u;
  if (c == 0x178) return 0xFF;
  if (c >= 0x179 && c <= 0x17E) return (c & 1u) ? c + 1 : c;
  // Greek
  if (c == 0x386) return 0x3AC;
  if (c >= 0x388 && c <= 0x38A) return c + 37;
  if (c == 0x38C) return 0x3CC;
  if (c == 0x38E || c == 0x38F) return c + 63;
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 32;
  // Cyrillic
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  if ((c >= 0x460 && c <= 0x481) || (c >= 0x48A && c <= 0x4BF)) return c | 1u;
  // Armenian
  if (c >= 0x531 && c <= 0x556) return c + 48;
  // Latin Extended Additional
  if ((c >= 0x1E00 && c <= 0x1E95) || (c >= 0x1EA0 && c <= 0x1EFF)) return c | 1u;
  return c;
}

bool is_celebrity(std::string_view text, std::span<const std::string> terms, std::size_t window) {
  const auto haystack = folded(text);
  for (const auto& term : terms) {
    const auto needle = folded(term);
    if (needle.empty()) continue;
    auto pos = haystack.find(needle);
    if (pos != std::u32string::npos && pos < window) return true;
  }
  return false;
}

std::string title_filename(std::string_view title) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < title.size(); ++i) {
    auto c = static_cast<unsigned char>(title[i]);
    if (c == ' ') {
      out += '_';
    } else if (c == '%' || c == '/' || c == '\\' || c < 0x20 || c == 0x7F || (i == 0 && c == '.')) {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

std::optional<std::string> DirectoryCorpus::text(const std::string& wiki, const std::string& title) {
  std::ifstream in(root_ + "/" + wiki + "/" + title_filename(title) + ".txt", std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ObservationReport build_observations(std::span<const HumanRecord> records,
                                     std::span<const SitelinkTitle> titles, ArticleSource& source,
                                     const Lexicon& lexicon, const YearRange& years) {
  std::map<std::pair<EntityId, std::string>, const std::string*> title_of;
  for (const auto& t : titles) title_of.emplace(std::make_pair(t.id, t.wiki), &t.title);

  std::vector<const HumanRecord*> ordered;
  for (const auto& r : records) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const HumanRecord* a, const HumanRecord* b) { return a->id < b->id; });

  ObservationReport report;
  for (const HumanRecord* r : ordered) {
    if (r->gender.kind != GenderKind::Male && r->gender.kind != GenderKind::Female) continue;
    if (!r->birth || !r->birth->bucketable()) continue;
    if (r->birth->year < years.first || r->birth->year > years.last) continue;

    std::string wiki;
    if (r->sitelinks.count(lexicon.preferred_wiki) && lexicon.terms_for(lexicon.preferred_wiki)) {
      wiki = lexicon.preferred_wiki;
    } else {
      for (const auto& [w, list] : lexicon.terms) {
        if (r->sitelinks.count(w)) {
          wiki = w;
          break;
        }
      }
    }
    if (wiki.empty()) continue;

    auto t = title_of.find({r->id, wiki});
    if (t == title_of.end()) {
      ++report.missing_title;
      continue;
    }
    auto raw = source.text(wiki, *t->second);
    if (!raw) {
      ++report.missing_text;
      continue;
    }
    auto stripped = strip_wikitext(*raw);
    Observation obs;
    obs.id = r->id;
    obs.wiki = wiki;
    obs.gender = r->gender;
    obs.birth_decade = r->birth->year - ((r->birth->year % 10) + 10) % 10;
    obs.is_celebrity = is_celebrity(stripped.text, *lexicon.terms_for(wiki), lexicon.window);
    report.observations.push_back(std::move(obs));
  }
  return report;
}

stats::LogitFit celebrity_regression(std::span<const Observation> observations,
                                     const std::string& baseline) {
  std::set<std::string> wikis;
  bool male = false, female = false;
  for (const auto& o : observations) {
    wikis.insert(o.wiki);
    male = male || o.gender.kind == GenderKind::Male;
    female = female || o.gender.kind == GenderKind::Female;
  }
  if (wikis.size() < 2) throw DomainError("celebrity regression needs observations from >= 2 wikis");
  if (!male || !female) throw DomainError("celebrity regression needs both genders");

  std::string base = wikis.count(baseline) ? baseline : *wikis.begin();
  std::vector<std::string> names;
  for (const auto& w : wikis) {
    if (w != base) names.push_back(w);
  }
  const auto wiki_columns = static_cast<Eigen::Index>(names.size());
  names.push_back("female");
  names.push_back("decade");

  const auto n = static_cast<Eigen::Index>(observations.size());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, wiki_columns + 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& o = observations[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < wiki_columns; ++j) {
      if (names[static_cast<std::size_t>(j)] == o.wiki) x(i, j) = 1.0;
    }
    x(i, wiki_columns) = o.gender.kind == GenderKind::Female ? 1.0 : 0.0;
    x(i, wiki_columns + 1) = static_cast<double>(o.birth_decade);
    y(i) = o.is_celebrity ? 1.0 : 0.0;
  }
  return stats::logistic_fit(x, y, std::move(names));
}

}  // namespace wigi::celebrity
