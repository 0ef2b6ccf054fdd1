#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace pmcore {

/// UTC instant with millisecond precision.
struct Timestamp {
  std::int64_t millis_since_epoch = 0;
  auto operator<=>(const Timestamp&) const = default;
};

/// Parses ISO-8601 / RFC-3339 date-times as written by XES producers
/// ("2023-04-22T15:08:00.784+02:00", "...Z", optional fraction, optional
/// offset meaning UTC). Sub-millisecond digits are truncated.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Renders as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string format_timestamp(Timestamp ts);

/// Value of an XES `<id>` attribute.
struct Identifier {
  std::string text;
  bool operator==(const Identifier&) const = default;
};

struct Attribute;
struct AttributeValue;

/// Keyed attribute collection. Keys are unique; iteration follows insertion
/// (document) order.
class Attributes {
 public:
  Attributes() = default;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Inserts or replaces; a replaced key keeps its original position.
  void set(Attribute attr);
  void set(std::string key, AttributeValue value);

  const Attribute* find(std::string_view key) const noexcept;
  const AttributeValue* value(std::string_view key) const noexcept;
  bool contains(std::string_view key) const noexcept { return find(key) != nullptr; }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  bool operator==(const Attributes& other) const;

 private:
  std::vector<Attribute> entries_;
};

/// Ordered child attributes of an XES `<list>`. Duplicate keys are allowed.
struct AttributeList {
  std::vector<Attribute> items;
  bool operator==(const AttributeList& other) const;
};

/// Keyed child attributes of an XES `<container>`.
struct AttributeMap {
  Attributes entries;
  bool operator==(const AttributeMap& other) const;
};

struct AttributeValue {
  using Variant = std::variant<std::string, std::int64_t, double, bool, Timestamp,
                               Identifier, AttributeList, AttributeMap>;
  Variant data;

  AttributeValue() = default;
  template <typename T>
    requires std::is_constructible_v<Variant, T&&>
  AttributeValue(T&& v) : data(std::forward<T>(v)) {}
  AttributeValue(const char* s) : data(std::string(s)) {}

  template <typename T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&data);
  }
  bool is_container() const noexcept {
    return std::holds_alternative<AttributeList>(data) ||
           std::holds_alternative<AttributeMap>(data);
  }

  bool operator==(const AttributeValue& other) const;
};

/// A keyed value. `children` holds XES nested (meta) attributes attached to
/// any attribute, independent of list/container contents.
struct Attribute {
  std::string key;
  AttributeValue value;
  Attributes children;

  bool operator==(const Attribute& other) const;
};

/// Nesting depth of an attribute (1 for a plain scalar).
std::size_t nesting_depth(const Attribute& attr);

/// Text form used for classifier labels and CSV cells.
std::string to_text(const AttributeValue& value);

inline constexpr std::string_view kActivityKey = "concept:name";
inline constexpr std::string_view kTimestampKey = "time:timestamp";
inline constexpr std::string_view kInvalidActivity = "__INVALID__";

struct Event {
  Attributes attributes;

  /// "concept:name" when present and textual.
  std::optional<std::string_view> activity() const noexcept;
  /// "time:timestamp" when present and a date.
  std::optional<Timestamp> timestamp() const noexcept;

  bool operator==(const Event&) const = default;
};

struct Trace {
  Attributes attributes;
  std::vector<Event> events;

  bool operator==(const Trace&) const = default;
};

struct Extension {
  std::string name;
  std::string prefix;
  std::string uri;
  bool operator==(const Extension&) const = default;
};

struct Classifier {
  std::string name;
  std::vector<std::string> keys;
  bool operator==(const Classifier&) const = default;
};

struct EventLog {
  Attributes attributes;
  Attributes global_trace_attrs;
  Attributes global_event_attrs;
  std::vector<Extension> extensions;
  std::vector<Classifier> classifiers;
  std::vector<Trace> traces;

  std::size_t event_count() const noexcept;
  bool operator==(const EventLog&) const = default;
};

using ActivityIndex = std::uint32_t;

struct Variant {
  std::vector<ActivityIndex> activities;
  std::uint64_t count = 0;
  bool operator==(const Variant&) const = default;
};

/// Compressed control-flow view of a log: distinct activity sequences with
/// multiplicities over an alphabet ordered by first appearance.
struct ActivityProjection {
  std::vector<std::string> alphabet;
  std::vector<Variant> variants;

  std::optional<ActivityIndex> index_of(std::string_view label) const noexcept;
  std::uint64_t total_traces() const noexcept;
  /// Throws InvariantViolation if any projection invariant is broken.
  void check_invariants() const;

  bool operator==(const ActivityProjection&) const = default;
};

struct LogStats {
  std::size_t events = 0;
  std::size_t activities = 0;
  std::size_t cases = 0;
  std::size_t variants = 0;
  bool operator==(const LogStats&) const = default;
};

/// Label of one event under the given classifier keys: present values joined
/// with '+', or "__INVALID__" when none of the keys is present.
std::string classify(const Event& event, const std::vector<std::string>& classifier_keys);

ActivityProjection project(const EventLog& log,
                           const std::vector<std::string>& classifier_keys = {
                               std::string(kActivityKey)});

/// Wraps every variant as <start_label> . v . <end_label>. Throws
/// LabelCollision if either label already belongs to the alphabet.
ActivityProjection add_artificial_acts(const ActivityProjection& proj,
                                       const std::string& start_label,
                                       const std::string& end_label);

/// Log-level counterpart: every trace gains a first and last event carrying
/// only "concept:name".
EventLog add_artificial_acts_log(const EventLog& log, const std::string& start_label,
                                 const std::string& end_label);

LogStats log_stats(const EventLog& log);

}  // namespace pmcore
