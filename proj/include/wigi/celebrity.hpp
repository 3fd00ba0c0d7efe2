#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wigi/entity.hpp"
#include "wigi/logistic.hpp"

namespace wigi::celebrity {

/// Per-wiki celebrity terms, matched near the start of an article.
struct Lexicon {
  /// Sections in file order; the order decides which local wiki is used
  /// when a record has several.
  std::vector<std::pair<std::string, std::vector<std::string>>> terms;
  std::size_t window = 200;  // Unicode scalar values
  std::string preferred_wiki = "enwiki";

  /// Reads `[wiki_code]` section headers followed by one term per line.
  /// `#` starts a comment line. Throws RowError on terms outside a section
  /// and InputError on empty sections.
  static Lexicon load(const std::string& path);

  const std::vector<std::string>* terms_for(std::string_view wiki) const;
};

/// Decodes UTF-8 into scalar values; invalid bytes become U+FFFD.
std::u32string decode_utf8(std::string_view text);

/// Simple lowercase mapping for Latin, Greek, Cyrillic and Armenian;
/// every other code point maps to itself.
char32_t fold_case(char32_t c);

/// True when some term starts at a scalar-value index below `window` in the
/// case-folded text.
bool is_celebrity(std::string_view text, std::span<const std::string> terms, std::size_t window);

/// Supplies raw article wikitext by (wiki, title).
class ArticleSource {
 public:
  virtual ~ArticleSource() = default;
  virtual std::optional<std::string> text(const std::string& wiki, const std::string& title) = 0;
};

/// File name used for a title inside `<dir>/<wiki>/`: spaces become '_',
/// and '%', '/', '\\', control characters and a leading '.' are
/// percent-encoded.
std::string title_filename(std::string_view title);

/// Reads `<root>/<wiki>/<title_filename(title)>.txt`.
class DirectoryCorpus : public ArticleSource {
 public:
  explicit DirectoryCorpus(std::string root) : root_(std::move(root)) {}
  std::optional<std::string> text(const std::string& wiki, const std::string& title) override;

 private:
  std::string root_;
};

struct Observation {
  EntityId id;
  std::string wiki;
  Gender gender;
  std::int64_t birth_decade = 0;
  bool is_celebrity = false;
};

struct YearRange {
  std::int64_t first = 1930;
  std::int64_t last = 1989;
};

struct ObservationReport {
  std::vector<Observation> observations;  // sorted by id
  std::uint64_t missing_text = 0;
  std::uint64_t missing_title = 0;
};

/// Selects binary-gender records born in `years` with a sitelink to a
/// lexicon wiki, reads the preferred-wiki article when that sitelink exists
/// (else the first lexicon wiki the record links to) and matches its terms.
ObservationReport build_observations(std::span<const HumanRecord> records,
                                     std::span<const SitelinkTitle> titles, ArticleSource& source,
                                     const Lexicon& lexicon, const YearRange& years = {});

/// Logit of is_celebrity on wiki indicators (baseline wiki absorbed in the
/// intercept), a female indicator and the numeric birth decade. The
/// baseline defaults to "dewiki" and falls back to the alphabetically first
/// wiki when absent.
stats::LogitFit celebrity_regression(std::span<const Observation> observations,
                                     const std::string& baseline = "dewiki");

}  // namespace wigi::celebrity
