#include "wigi/entity.hpp"

#include <array>
#include <charconv>

#include "wigi/errors.hpp"

namespace wigi {

EntityId::EntityId(std::uint64_t number) : number_(number) {
  if (number == 0) throw InputError("entity id must be >= 1");
}

std::optional<EntityId> EntityId::try_parse(std::string_view text) noexcept {
  if (text.size() < 2 || text.front() != 'Q') return std::nullopt;
  std::uint64_t n = 0;
  auto digits = text.substr(1);
  if (digits.front() == '+' || digits.front() == '-') return std::nullopt;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || n == 0) return std::nullopt;
  EntityId id;
  id.number_ = n;
  return id;
}

EntityId EntityId::parse(std::string_view text) {
  if (auto id = try_parse(text)) return *id;
  throw InputError("malformed entity id '" + std::string(text) + "'");
}

namespace {

constexpr std::array<std::string_view, kGenderKindCount> kGenderNames = {
    "male",      "female",    "transgender_female", "transgender_male", "intersex",
    "genderqueer", "faafafine", "kathoey",          "other",            "unknown",
};

constexpr std::array<std::string_view, 5> kPrecisionNames = {
    "year", "decade", "century", "millennium", "coarser",
};

}  // namespace

std::string_view gender_kind_name(GenderKind k) {
  return kGenderNames[static_cast<std::size_t>(k)];
}

std::string to_string(const Gender& g) {
  if (g.kind == GenderKind::OtherNonbinary) return "other:" + g.other.str();
  return std::string(gender_kind_name(g.kind));
}

Gender parse_gender(std::string_view text) {
  if (text.rfind("other:", 0) == 0) {
    return Gender{GenderKind::OtherNonbinary, EntityId::parse(text.substr(6))};
  }
  for (std::size_t i = 0; i < kGenderNames.size(); ++i) {
    if (i == static_cast<std::size_t>(GenderKind::OtherNonbinary)) continue;
    if (kGenderNames[i] == text) return Gender::of(static_cast<GenderKind>(i));
  }
  throw InputError("unknown gender '" + std::string(text) + "'");
}

std::string_view to_string(DatePrecision p) {
  return kPrecisionNames[static_cast<std::size_t>(p)];
}

DatePrecision parse_precision(std::string_view text) {
  for (std::size_t i = 0; i < kPrecisionNames.size(); ++i) {
    if (kPrecisionNames[i] == text) return static_cast<DatePrecision>(i);
  }
  throw InputError("unknown date precision '" + std::string(text) + "'");
}

}  // namespace wigi
