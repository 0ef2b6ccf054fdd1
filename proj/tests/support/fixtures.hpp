// Test-only XES writer and random generators for logs and projections.
#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pmcore/event_log.hpp"

namespace fixture {

using namespace pmcore;

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

/// ISO-8601 UTC text, computed with the C library rather than the parser's
/// own calendar code.
inline std::string iso(Timestamp ts) {
  std::int64_t secs = ts.millis_since_epoch / 1000;
  std::int64_t ms = ts.millis_since_epoch % 1000;
  if (ms < 0) {
    ms += 1000;
    --secs;
  }
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

inline std::string scalar_text(const AttributeValue& v) {
  if (auto s = v.get_if<std::string>()) return *s;
  if (auto i = v.get_if<std::int64_t>()) return std::to_string(*i);
  if (auto d = v.get_if<double>()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (auto b = v.get_if<bool>()) return *b ? "true" : "false";
  if (auto t = v.get_if<Timestamp>()) return iso(*t);
  if (auto id = v.get_if<Identifier>()) return id->text;
  return {};
}

inline const char* tag_of(const AttributeValue& v) {
  switch (v.data.index()) {
    case 0: return "string";
    case 1: return "int";
    case 2: return "float";
    case 3: return "boolean";
    case 4: return "date";
    case 5: return "id";
    case 6: return "list";
    default: return "container";
  }
}

inline void write_attribute(std::string& out, const Attribute& a) {
  const char* tag = tag_of(a.value);
  out += '<';
  out += tag;
  out += " key=\"" + escape(a.key) + '"';
  const auto* list = a.value.get_if<AttributeList>();
  const auto* map = a.value.get_if<AttributeMap>();
  if (!list && !map) out += " value=\"" + escape(scalar_text(a.value)) + '"';
  if (!list && !map && a.children.empty()) {
    out += "/>";
    return;
  }
  out += '>';
  for (const auto& c : a.children) write_attribute(out, c);
  if (list) {
    out += "<values>";
    for (const auto& item : list->items) write_attribute(out, item);
    out += "</values>";
  }
  if (map) {
    for (const auto& e : map->entries) write_attribute(out, e);
  }
  out += "</";
  out += tag;
  out += '>';
}

inline std::string write_xes(const EventLog& log) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<log xes.version=\"1.0\">\n";
  for (const auto& e : log.extensions) {
    out += "<extension name=\"" + escape(e.name) + "\" prefix=\"" + escape(e.prefix) +
           "\" uri=\"" + escape(e.uri) + "\"/>\n";
  }
  auto globals = [&](const char* scope, const Attributes& attrs) {
    if (attrs.empty()) return;
    out += std::string("<global scope=\"") + scope + "\">";
    for (const auto& a : attrs) write_attribute(out, a);
    out += "</global>\n";
  };
  globals("trace", log.global_trace_attrs);
  globals("event", log.global_event_attrs);
  for (const auto& c : log.classifiers) {
    std::string keys;
    for (const auto& k : c.keys) {
      if (!keys.empty()) keys += ' ';
      keys += k.find(' ') == std::string::npos ? k : "'" + k + "'";
    }
    out += "<classifier name=\"" + escape(c.name) + "\" keys=\"" + escape(keys) + "\"/>\n";
  }
  for (const auto& a : log.attributes) write_attribute(out, a);
  out += '\n';
  for (const auto& t : log.traces) {
    out += "<trace>";
    for (const auto& a : t.attributes) write_attribute(out, a);
    for (const auto& e : t.events) {
      out += "<event>";
      for (const auto& a : e.attributes) write_attribute(out, a);
      out += "</event>";
    }
    out += "</trace>\n";
  }
  out += "</log>\n";
  return out;
}

// ---------------------------------------------------------------------------
// Random logs
// ---------------------------------------------------------------------------

class LogGenerator {
 public:
  explicit LogGenerator(std::uint64_t seed) : rng_(seed) {}

  EventLog log(std::size_t max_traces = 6, std::size_t max_events = 6) {
    EventLog log;
    if (coin()) log.extensions.push_back({"Concept", "concept", "http://www.xes-standard.org/concept.xesext"});
    if (coin()) log.extensions.push_back({"Time", "time", "http://www.xes-standard.org/time.xesext"});
    log.global_trace_attrs = attributes(1, 2);
    log.global_event_attrs = attributes(1, 2);
    if (coin()) log.classifiers.push_back({"Activity", {"concept:name"}});
    if (coin()) log.classifiers.push_back({"Both", {"concept:name", "org:resource"}});
    log.attributes = attributes(3, 3);
    const std::size_t traces = pick(max_traces + 1);
    for (std::size_t i = 0; i < traces; ++i) {
      Trace t;
      t.attributes.set("concept:name", AttributeValue("case " + std::to_string(i)));
      for (const auto& a : attributes(2, 3)) t.attributes.set(a);
      const std::size_t events = pick(max_events + 1);
      for (std::size_t j = 0; j < events; ++j) {
        Event e;
        e.attributes.set("concept:name", AttributeValue(std::string(1, static_cast<char>('a' + pick(4)))));
        e.attributes.set("time:timestamp", AttributeValue(timestamp()));
        for (const auto& a : attributes(3, 3)) e.attributes.set(a);
        t.events.push_back(std::move(e));
      }
      log.traces.push_back(std::move(t));
    }
    return log;
  }

 private:
  bool coin() { return pick(2) == 1; }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  Timestamp timestamp() {
    // 2000-01-01 .. 2030-01-01
    return Timestamp{std::uniform_int_distribution<std::int64_t>(946684800000LL, 1893456000000LL)(rng_)};
  }

  Attributes attributes(std::size_t max_count, int depth) {
    Attributes out;
    const std::size_t n = pick(max_count + 1);
    for (std::size_t i = 0; i < n; ++i) out.set(attribute("k" + std::to_string(i), depth));
    return out;
  }

  Attribute attribute(std::string key, int depth) {
    static const std::vector<std::string> strings = {
        "plain", "", "a&b", "<tag>", "say \"hi\"", "it's", "\xc3\xbc" "n" "\xc3\xaf" "c" "\xc3\xb8" "de",
        "  spaced  ", "1.5", "true"};
    static const std::vector<double> doubles = {0.0, 0.1, -2.5e10, 1e-300, 3.0, 123456.789,
                                                 std::numeric_limits<double>::max()};
    static const std::vector<std::int64_t> ints = {0, 1, -1, 42, std::numeric_limits<std::int64_t>::min(),
                                                   std::numeric_limits<std::int64_t>::max()};
    Attribute a;
    a.key = std::move(key);
    const std::size_t kinds = depth > 1 ? 8 : 6;
    switch (pick(kinds)) {
      case 0: a.value = strings[pick(strings.size())]; break;
      case 1: a.value = ints[pick(ints.size())]; break;
      case 2: a.value = doubles[pick(doubles.size())]; break;
      case 3: a.value = coin(); break;
      case 4: a.value = timestamp(); break;
      case 5: a.value = Identifier{"e1f2c3d4-0000-4a5b-8c9d-" + std::to_string(1000000 + pick(1000))}; break;
      case 6: {
        AttributeList list;
        const std::size_t n = pick(3);
        // Lists may repeat keys.
        for (std::size_t i = 0; i < n; ++i) list.items.push_back(attribute("item", depth - 1));
        a.value = std::move(list);
        break;
      }
      default: {
        AttributeMap map;
        map.entries = attributes(2, depth - 1);
        a.value = std::move(map);
        break;
      }
    }
    if (depth > 1 && !a.value.get_if<AttributeMap>() && pick(4) == 0) {
      a.children = attributes(2, depth - 1);
    }
    return a;
  }

  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Random projections
// ---------------------------------------------------------------------------

inline ActivityProjection random_projection(std::mt19937_64& rng, std::size_t max_acts,
                                            std::size_t max_variants, std::size_t max_len,
                                            std::uint64_t max_count = 4) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  ActivityProjection proj;
  const std::size_t acts = pick(1, max_acts);
  for (std::size_t i = 0; i < acts; ++i) proj.alphabet.push_back(std::string(1, static_cast<char>('a' + i)));
  std::set<std::vector<ActivityIndex>> seen;
  const std::size_t variants = pick(1, max_variants);
  for (std::size_t attempt = 0; attempt < variants * 4 && proj.variants.size() < variants; ++attempt) {
    std::vector<ActivityIndex> seq(pick(1, max_len));
    for (auto& x : seq) x = static_cast<ActivityIndex>(pick(0, acts - 1));
    if (!seen.insert(seq).second) continue;
    proj.variants.push_back({seq, pick(1, max_count)});
  }
  return proj;
}

}  // namespace fixture
