#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "wigi/entity.hpp"
#include "wigi/property_config.hpp"

namespace wigi::ingest {

struct IngestStats {
  std::uint64_t entities_seen = 0;
  std::uint64_t humans = 0;
  std::uint64_t places = 0;
  std::uint64_t skipped = 0;
  std::uint64_t malformed = 0;
  /// Line numbers of malformed entities (first kMaxMalformedLines kept).
  std::vector<std::uint64_t> malformed_lines;
  /// Humans whose top-ranked gender claims disagree; first claim used.
  std::uint64_t gender_conflicts = 0;
  /// Birth or death dates coarser than a year (kept, not bucketed).
  std::uint64_t coarse_dates = 0;

  static constexpr std::size_t kMaxMalformedLines = 1000;
};

/// Receives classified entities. Callbacks are invoked sequentially in dump
/// order, whatever the number of parsing threads.
class RecordSink {
 public:
  virtual ~RecordSink() = default;
  virtual void on_human(HumanRecord&& record, std::vector<SitelinkTitle>&& titles) = 0;
  virtual void on_place(PlaceRecord&& place) = 0;
};

struct StreamOptions {
  bool strict = false;  // abort on the first malformed entity
  unsigned threads = 1;
  std::size_t batch_lines = 512;  // lines buffered per thread
};

struct HumanEntity {
  HumanRecord record;
  std::vector<SitelinkTitle> titles;
  bool gender_conflict = false;
  int coarse_dates = 0;
};
struct Skipped {};
struct Malformed {
  std::string reason;
};
using Classified = std::variant<HumanEntity, PlaceRecord, Skipped, Malformed>;

/// Classifies one JSON entity (no trailing comma).
Classified classify_entity(std::string_view json, const PropertyConfig& config);

/// Streams a line-delimited or array-wrapped dump. Memory is bounded by
/// threads * batch_lines * (largest entity). Throws Utf8Error on invalid
/// UTF-8 and ParseError on a malformed entity when options.strict is set.
IngestStats stream_entities(std::istream& dump, const PropertyConfig& config,
                            RecordSink& sink, const StreamOptions& options = {});

/// Returns the byte offset of the first invalid UTF-8 sequence, if any.
std::optional<std::size_t> find_invalid_utf8(std::string_view bytes) noexcept;

using PlaceIndex = std::unordered_map<EntityId, PlaceRecord>;

/// One-hop birthplace resolution: the place itself if it is a country,
/// else its containing country, else nothing.
std::optional<EntityId> resolve_country(const HumanRecord& record, const PlaceIndex& places);

}  // namespace wigi::ingest
