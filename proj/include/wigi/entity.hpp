#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace wigi {

/// Wikidata item identifier ("Q" followed by a positive integer).
class EntityId {
 public:
  constexpr EntityId() = default;
  explicit EntityId(std::uint64_t number);

  /// Parses "Q123". Throws InputError on anything else.
  static EntityId parse(std::string_view text);
  static std::optional<EntityId> try_parse(std::string_view text) noexcept;

  std::uint64_t number() const noexcept { return number_; }
  bool valid() const noexcept { return number_ != 0; }
  std::string str() const { return "Q" + std::to_string(number_); }

  friend auto operator<=>(const EntityId&, const EntityId&) = default;

 private:
  std::uint64_t number_ = 0;
};

enum class GenderKind : std::uint8_t {
  Male,
  Female,
  TransgenderFemale,
  TransgenderMale,
  Intersex,
  Genderqueer,
  Faafafine,
  Kathoey,
  OtherNonbinary,
  Unknown,
};

inline constexpr std::size_t kGenderKindCount = 10;

struct Gender {
  GenderKind kind = GenderKind::Unknown;
  EntityId other;  // only set for OtherNonbinary

  static Gender of(GenderKind k) { return Gender{k, {}}; }

  bool is_known() const noexcept { return kind != GenderKind::Unknown; }
  bool is_nonbinary() const noexcept {
    return kind != GenderKind::Male && kind != GenderKind::Female &&
           kind != GenderKind::Unknown;
  }

  friend bool operator==(const Gender&, const Gender&) = default;
};

/// Text form used in the records file: "male", "female",
/// "transgender_female", ..., "other:Q123", "unknown".
std::string to_string(const Gender& g);
Gender parse_gender(std::string_view text);
std::string_view gender_kind_name(GenderKind k);

enum class DatePrecision : std::uint8_t { Year, Decade, Century, Millennium, Coarser };

std::string_view to_string(DatePrecision p);
DatePrecision parse_precision(std::string_view text);

/// Signed year using astronomical numbering (year 0 is 1 BCE).
struct YearValue {
  std::int64_t year = 0;
  DatePrecision precision = DatePrecision::Year;

  bool bucketable() const noexcept { return precision == DatePrecision::Year; }
  friend bool operator==(const YearValue&, const YearValue&) = default;
};

struct HumanRecord {
  EntityId id;
  Gender gender;
  std::optional<YearValue> birth;
  std::optional<YearValue> death;
  std::optional<EntityId> place_of_birth;
  std::set<EntityId> citizenships;
  std::set<EntityId> ethnic_groups;
  std::optional<EntityId> country;  // derived, see resolve_country
  std::set<std::string> sitelinks;  // e.g. "enwiki"

  friend bool operator==(const HumanRecord&, const HumanRecord&) = default;
};

struct PlaceRecord {
  EntityId id;
  bool is_country = false;
  std::optional<EntityId> containing_country;
};

/// Article title of one sitelink; kept beside the records file so article
/// sizes and article text can be joined back to an item.
struct SitelinkTitle {
  EntityId id;
  std::string wiki;
  std::string title;

  friend auto operator<=>(const SitelinkTitle&, const SitelinkTitle&) = default;
};

}  // namespace wigi

template <>
struct std::hash<wigi::EntityId> {
  std::size_t operator()(const wigi::EntityId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.number());
  }
};
