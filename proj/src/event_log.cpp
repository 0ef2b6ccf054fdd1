#include "pmcore/event_log.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "hash.hpp"
#include "pmcore/error.hpp"

namespace pmcore {

// ---------------------------------------------------------------------------
// Timestamps
// ---------------------------------------------------------------------------

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (H. Hinnant).
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

constexpr CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

bool read_digits(std::string_view s, std::size_t& pos, std::size_t n, int& out) {
  if (pos + n > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  pos += n;
  out = v;
  return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) {
  if (pos >= s.size() || s[pos] != c) return false;
  ++pos;
  return true;
}

constexpr unsigned days_in_month(std::int64_t y, unsigned m) {
  constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  return m == 2 && leap ? 29 : kDays[m - 1];
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  std::size_t pos = 0;
  int year, month, day, hour = 0, minute = 0, second = 0;
  if (!read_digits(s, pos, 4, year) || !expect(s, pos, '-') ||
      !read_digits(s, pos, 2, month) || !expect(s, pos, '-') ||
      !read_digits(s, pos, 2, day)) {
    return std::nullopt;
  }
  if (month < 1 || month > 12 || day < 1 ||
      static_cast<unsigned>(day) > days_in_month(year, static_cast<unsigned>(month))) {
    return std::nullopt;
  }
  int millis = 0;
  int offset_minutes = 0;
  if (pos < s.size()) {
    if (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ') return std::nullopt;
    ++pos;
    if (!read_digits(s, pos, 2, hour) || !expect(s, pos, ':') ||
        !read_digits(s, pos, 2, minute)) {
      return std::nullopt;
    }
    if (pos < s.size() && s[pos] == ':') {
      ++pos;
      if (!read_digits(s, pos, 2, second)) return std::nullopt;
    }
    if (hour > 23 || minute > 59 || second > 60) return std::nullopt;
    if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
      ++pos;
      std::size_t digits = 0;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        if (digits < 3) millis = millis * 10 + (s[pos] - '0');
        ++digits;
        ++pos;
      }
      if (digits == 0) return std::nullopt;
      for (std::size_t i = digits; i < 3; ++i) millis *= 10;
    }
    if (pos < s.size()) {
      const char c = s[pos];
      if (c == 'Z' || c == 'z') {
        ++pos;
      } else if (c == '+' || c == '-') {
        ++pos;
        int oh, om = 0;
        if (!read_digits(s, pos, 2, oh)) return std::nullopt;
        if (pos < s.size() && s[pos] == ':') ++pos;
        if (pos < s.size() && !read_digits(s, pos, 2, om)) return std::nullopt;
        if (oh > 23 || om > 59) return std::nullopt;
        offset_minutes = (c == '+' ? 1 : -1) * (oh * 60 + om);
      } else {
        return std::nullopt;
      }
    }
  }
  if (pos != s.size()) return std::nullopt;

  const std::int64_t days =
      days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  const std::int64_t secs = days * 86400 + hour * 3600 + minute * 60 + second -
                            static_cast<std::int64_t>(offset_minutes) * 60;
  return Timestamp{secs * 1000 + millis};
}

std::string format_timestamp(Timestamp ts) {
  std::int64_t ms = ts.millis_since_epoch;
  std::int64_t days = ms / 86'400'000;
  std::int64_t rem = ms % 86'400'000;
  if (rem < 0) {
    rem += 86'400'000;
    --days;
  }
  const CivilDate date = civil_from_days(days);
  const auto hour = static_cast<int>(rem / 3'600'000);
  const auto minute = static_cast<int>(rem / 60'000 % 60);
  const auto second = static_cast<int>(rem / 1000 % 60);
  const auto milli = static_cast<int>(rem % 1000);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02d:%02d:%02d.%03dZ",
                static_cast<long long>(date.year), date.month, date.day, hour, minute,
                second, milli);
  return buf;
}

// ---------------------------------------------------------------------------
// Attributes
// ---------------------------------------------------------------------------

void Attributes::set(Attribute attr) {
  for (auto& existing : entries_) {
    if (existing.key == attr.key) {
      existing = std::move(attr);
      return;
    }
  }
  entries_.push_back(std::move(attr));
}

void Attributes::set(std::string key, AttributeValue value) {
  set(Attribute{std::move(key), std::move(value), {}});
}

const Attribute* Attributes::find(std::string_view key) const noexcept {
  for (const auto& a : entries_) {
    if (a.key == key) return &a;
  }
  return nullptr;
}

const AttributeValue* Attributes::value(std::string_view key) const noexcept {
  const Attribute* a = find(key);
  return a ? &a->value : nullptr;
}

bool Attributes::operator==(const Attributes& other) const { return entries_ == other.entries_; }
bool AttributeList::operator==(const AttributeList& other) const { return items == other.items; }
bool AttributeMap::operator==(const AttributeMap& other) const {
  return entries == other.entries;
}
bool AttributeValue::operator==(const AttributeValue& other) const { return data == other.data; }
bool Attribute::operator==(const Attribute& other) const {
  return key == other.key && value == other.value && children == other.children;
}

std::size_t nesting_depth(const Attribute& attr) {
  std::size_t inner = 0;
  for (const auto& c : attr.children) inner = std::max(inner, nesting_depth(c));
  if (const auto* list = attr.value.get_if<AttributeList>()) {
    for (const auto& c : list->items) inner = std::max(inner, nesting_depth(c));
  } else if (const auto* map = attr.value.get_if<AttributeMap>()) {
    for (const auto& c : map->entries) inner = std::max(inner, nesting_depth(c));
  }
  return inner + 1;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string to_text(const AttributeValue& value) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(Timestamp t) const { return format_timestamp(t); }
    std::string operator()(const Identifier& id) const { return id.text; }
    std::string operator()(const AttributeList& l) const {
      std::string out = "[";
      for (std::size_t i = 0; i < l.items.size(); ++i) {
        if (i) out += ",";
        out += to_text(l.items[i].value);
      }
      return out + "]";
    }
    std::string operator()(const AttributeMap& m) const {
      std::string out = "{";
      bool first = true;
      for (const auto& a : m.entries) {
        if (!first) out += ",";
        first = false;
        out += a.key + "=" + to_text(a.value);
      }
      return out + "}";
    }
  };
  return std::visit(Visitor{}, value.data);
}

// ---------------------------------------------------------------------------
// Events and logs
// ---------------------------------------------------------------------------

std::optional<std::string_view> Event::activity() const noexcept {
  if (const auto* v = attributes.value(kActivityKey)) {
    if (const auto* s = v->get_if<std::string>()) return std::string_view(*s);
  }
  return std::nullopt;
}

std::optional<Timestamp> Event::timestamp() const noexcept {
  if (const auto* v = attributes.value(kTimestampKey)) {
    if (const auto* t = v->get_if<Timestamp>()) return *t;
  }
  return std::nullopt;
}

std::size_t EventLog::event_count() const noexcept {
  std::size_t n = 0;
  for (const auto& t : traces) n += t.events.size();
  return n;
}

std::optional<ActivityIndex> ActivityProjection::index_of(std::string_view label) const noexcept {
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (alphabet[i] == label) return static_cast<ActivityIndex>(i);
  }
  return std::nullopt;
}

std::uint64_t ActivityProjection::total_traces() const noexcept {
  std::uint64_t n = 0;
  for (const auto& v : variants) n += v.count;
  return n;
}

void ActivityProjection::check_invariants() const {
  std::unordered_set<std::string_view> labels;
  for (const auto& a : alphabet) {
    if (!labels.insert(a).second) {
      throw Error(ErrorCode::InvariantViolation, "duplicate alphabet label '" + a + "'");
    }
  }
  std::unordered_set<std::vector<ActivityIndex>, detail::SequenceHash> seen;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const auto& v = variants[i];
    if (v.count == 0) {
      throw Error(ErrorCode::InvariantViolation,
                  "variant " + std::to_string(i) + " has count 0");
    }
    for (ActivityIndex a : v.activities) {
      if (a >= alphabet.size()) {
        throw Error(ErrorCode::InvariantViolation,
                    "variant " + std::to_string(i) + " references activity index " +
                        std::to_string(a) + " outside alphabet of size " +
                        std::to_string(alphabet.size()));
      }
    }
    if (!seen.insert(v.activities).second) {
      throw Error(ErrorCode::InvariantViolation,
                  "variant " + std::to_string(i) + " duplicates an earlier variant");
    }
  }
}

std::string classify(const Event& event, const std::vector<std::string>& classifier_keys) {
  std::string label;
  bool any = false;
  for (const auto& key : classifier_keys) {
    const AttributeValue* v = event.attributes.value(key);
    if (!v) continue;
    if (any) label += '+';
    if (const auto* s = v->get_if<std::string>()) {
      label += *s;
    } else {
      label += to_text(*v);
    }
    any = true;
  }
  return any ? label : std::string(kInvalidActivity);
}

ActivityProjection project(const EventLog& log, const std::vector<std::string>& classifier_keys) {
  ActivityProjection proj;
  std::unordered_map<std::string, ActivityIndex, detail::StringHash, std::equal_to<>> index;
  std::unordered_map<std::vector<ActivityIndex>, std::size_t, detail::SequenceHash> variant_pos;

  const bool single_key = classifier_keys.size() == 1;
  std::vector<ActivityIndex> seq;
  std::string scratch;
  for (const auto& trace : log.traces) {
    seq.clear();
    seq.reserve(trace.events.size());
    for (const auto& event : trace.events) {
      std::string_view label;
      const std::string* direct = nullptr;
      if (single_key) {
        if (const auto* v = event.attributes.value(classifier_keys.front())) {
          direct = v->get_if<std::string>();
        }
      }
      if (direct) {
        label = *direct;
      } else {
        scratch = classify(event, classifier_keys);
        label = scratch;
      }
      auto it = index.find(label);
      if (it == index.end()) {
        const auto idx = static_cast<ActivityIndex>(proj.alphabet.size());
        proj.alphabet.emplace_back(label);
        it = index.emplace(std::string(label), idx).first;
      }
      seq.push_back(it->second);
    }
    auto [vit, inserted] = variant_pos.try_emplace(seq, proj.variants.size());
    if (inserted) {
      proj.variants.push_back(Variant{seq, 1});
    } else {
      ++proj.variants[vit->second].count;
    }
  }
  return proj;
}

ActivityProjection add_artificial_acts(const ActivityProjection& proj,
                                       const std::string& start_label,
                                       const std::string& end_label) {
  if (start_label == end_label) {
    throw Error(ErrorCode::LabelCollision,
                "start and end labels are identical: '" + start_label + "'");
  }
  for (const auto& label : {start_label, end_label}) {
    if (proj.index_of(label)) {
      throw Error(ErrorCode::LabelCollision,
                  "label '" + label + "' already present in the alphabet");
    }
  }
  ActivityProjection out;
  out.alphabet = proj.alphabet;
  const auto start = static_cast<ActivityIndex>(out.alphabet.size());
  out.alphabet.push_back(start_label);
  const auto end = static_cast<ActivityIndex>(out.alphabet.size());
  out.alphabet.push_back(end_label);

  out.variants.reserve(proj.variants.size());
  for (const auto& v : proj.variants) {
    Variant w;
    w.count = v.count;
    w.activities.reserve(v.activities.size() + 2);
    w.activities.push_back(start);
    w.activities.insert(w.activities.end(), v.activities.begin(), v.activities.end());
    w.activities.push_back(end);
    out.variants.push_back(std::move(w));
  }
  return out;
}

EventLog add_artificial_acts_log(const EventLog& log, const std::string& start_label,
                                 const std::string& end_label) {
  EventLog out = log;
  for (auto& trace : out.traces) {
    Event start;
    start.attributes.set(std::string(kActivityKey), start_label);
    Event end;
    end.attributes.set(std::string(kActivityKey), end_label);
    trace.events.insert(trace.events.begin(), std::move(start));
    trace.events.push_back(std::move(end));
  }
  return out;
}

LogStats log_stats(const EventLog& log) {
  LogStats stats;
  stats.cases = log.traces.size();
  std::unordered_set<std::string_view> activities;
  for (const auto& trace : log.traces) {
    stats.events += trace.events.size();
    for (const auto& e : trace.events) {
      if (auto a = e.activity()) activities.insert(*a);
    }
  }
  stats.activities = activities.size();
  stats.variants = project(log).variants.size();
  return stats;
}

}  // namespace pmcore
