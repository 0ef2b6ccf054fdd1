#include <algorithm>
#include <charconv>
#include <cstring>
#include <sstream>

#include "byte_source.hpp"
#include "pmcore/error.hpp"
#include "pmcore/xes.hpp"
#include "xml_tokenizer.hpp"

namespace pmcore::xes {

namespace {

using detail::ByteSource;
using detail::TokenKind;
using detail::XmlToken;
using detail::XmlTokenizer;

enum class AttrKind { String, Date, Int, Float, Boolean, Id, List, Container, None };

AttrKind attr_kind(std::string_view tag) noexcept {
  switch (tag.size()) {
    case 2:
      if (tag == "id") return AttrKind::Id;
      break;
    case 3:
      if (tag == "int") return AttrKind::Int;
      break;
    case 4:
      if (tag == "date") return AttrKind::Date;
      if (tag == "list") return AttrKind::List;
      break;
    case 5:
      if (tag == "float") return AttrKind::Float;
      break;
    case 6:
      if (tag == "string") return AttrKind::String;
      break;
    case 7:
      if (tag == "boolean") return AttrKind::Boolean;
      break;
    case 9:
      if (tag == "container") return AttrKind::Container;
      break;
    default:
      break;
  }
  return AttrKind::None;
}

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<std::int64_t> parse_int(std::string_view s) noexcept {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_float(std::string_view s) noexcept {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<bool> parse_bool(std::string_view s) noexcept {
  s = trim(s);
  auto eq = [](std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
             return (x | 0x20) == y;
           });
  };
  if (eq(s, "true") || s == "1") return true;
  if (eq(s, "false") || s == "0") return false;
  return std::nullopt;
}

/// Splits the `keys` attribute of a classifier. Keys are separated by
/// whitespace; single quotes group keys that contain spaces.
std::vector<std::string> split_classifier_keys(std::string_view s) {
  std::vector<std::string> keys;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    if (i >= s.size()) break;
    if (s[i] == '\'') {
      const auto close = s.find('\'', i + 1);
      const auto stop = close == std::string_view::npos ? s.size() : close;
      keys.emplace_back(s.substr(i + 1, stop - i - 1));
      i = stop + 1;
    } else {
      const auto start = i;
      while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\n' && s[i] != '\r') ++i;
      keys.emplace_back(s.substr(start, i - start));
    }
  }
  std::erase_if(keys, [](const std::string& k) { return k.empty(); });
  return keys;
}

class XesBuilder {
 public:
  XesBuilder(ByteSource& source, const ImportOptions& opts) : tok_(source), opts_(opts) {
    if (opts_.max_nesting_depth < 1) {
      throw Error(ErrorCode::InvalidArgument, "max_nesting_depth must be at least 1");
    }
  }

  EventLog run() {
    XmlToken* t = &tok_.next();
    while (t->kind != TokenKind::EndOfDocument && t->kind != TokenKind::StartElement) {
      t = &tok_.next();
    }
    if (t->kind == TokenKind::EndOfDocument) tok_.fail("document has no root element", t->offset);
    if (local_name(t->name) != "log") {
      tok_.fail("root element is <" + std::string(t->name) + ">, expected <log>", t->offset);
    }
    if (!t->self_closing) parse_log_body();
    // Trailing content after the root must still be well formed.
    for (XmlToken* rest = &tok_.next(); rest->kind != TokenKind::EndOfDocument;
         rest = &tok_.next()) {
    }
    if (opts_.sort_events_by_time) sort_events();
    return std::move(log_);
  }

 private:
  static std::string_view local_name(std::string_view qname) noexcept {
    const auto colon = qname.find(':');
    return colon == std::string_view::npos ? qname : qname.substr(colon + 1);
  }

  std::string attr_text(const XmlToken& t, std::string_view name) {
    const auto* a = t.attribute(name);
    return a ? tok_.decode_to_string(a->raw_value) : std::string();
  }

  // Consumes tokens up to and including the end tag of the element just
  // opened (depth `base`).
  void skip_subtree() {
    const std::size_t target = tok_.depth() - 1;
    while (tok_.depth() > target) {
      XmlToken& t = tok_.next();
      if (t.kind == TokenKind::EndOfDocument) return;
    }
  }

  void parse_log_body() {
    for (;;) {
      XmlToken& t = tok_.next();
      if (t.kind == TokenKind::EndElement) return;
      const std::string_view name = local_name(t.name);
      const bool leaf = t.self_closing;
      if (name == "trace") {
        log_.traces.emplace_back();
        if (!leaf) parse_trace(log_.traces.back());
      } else if (const AttrKind kind = attr_kind(name); kind != AttrKind::None) {
        log_.attributes.set(parse_attribute(t, kind, 1));
      } else if (name == "extension") {
        log_.extensions.push_back(
            Extension{attr_text(t, "name"), attr_text(t, "prefix"), attr_text(t, "uri")});
        if (!leaf) skip_subtree();
      } else if (name == "global") {
        const std::string scope = attr_text(t, "scope");
        Attributes& target =
            scope == "trace" ? log_.global_trace_attrs : log_.global_event_attrs;
        if (!leaf) parse_attribute_children(target, 1);
      } else if (name == "classifier") {
        Classifier c{attr_text(t, "name"), split_classifier_keys(attr_text(t, "keys"))};
        if (c.keys.empty()) {
          throw Error(ErrorCode::InvalidAttribute,
                      "classifier '" + c.name + "' has no keys at byte offset " +
                          std::to_string(t.offset));
        }
        log_.classifiers.push_back(std::move(c));
        if (!leaf) skip_subtree();
      } else if (!leaf) {
        skip_subtree();
      }
    }
  }

  void parse_trace(Trace& trace) {
    for (;;) {
      XmlToken& t = tok_.next();
      if (t.kind == TokenKind::EndElement) return;
      const std::string_view name = local_name(t.name);
      if (name == "event") {
        trace.events.emplace_back();
        if (!t.self_closing) parse_attribute_children(trace.events.back().attributes, 1);
      } else if (const AttrKind kind = attr_kind(name); kind != AttrKind::None) {
        trace.attributes.set(parse_attribute(t, kind, 1));
      } else if (!t.self_closing) {
        skip_subtree();
      }
    }
  }

  // Reads attribute elements until the enclosing element closes.
  void parse_attribute_children(Attributes& out, std::size_t depth) {
    for (;;) {
      XmlToken& t = tok_.next();
      if (t.kind == TokenKind::EndElement) return;
      if (const AttrKind kind = attr_kind(local_name(t.name)); kind != AttrKind::None) {
        out.set(parse_attribute(t, kind, depth));
      } else if (!t.self_closing) {
        skip_subtree();
      }
    }
  }

  void parse_attribute_items(std::vector<Attribute>& out, std::size_t depth) {
    for (;;) {
      XmlToken& t = tok_.next();
      if (t.kind == TokenKind::EndElement) return;
      if (const AttrKind kind = attr_kind(local_name(t.name)); kind != AttrKind::None) {
        out.push_back(parse_attribute(t, kind, depth));
      } else if (!t.self_closing) {
        skip_subtree();
      }
    }
  }

  template <typename T>
  AttributeValue typed_or_fallback(const std::optional<T>& parsed, std::string_view raw,
                                   std::string_view type, std::uint64_t offset) {
    if (parsed) return AttributeValue(*parsed);
    if (!opts_.date_fallback_to_text) {
      throw Error(ErrorCode::InvalidAttribute,
                  "unparseable " + std::string(type) + " value '" + std::string(raw) +
                      "' at byte offset " + std::to_string(offset));
    }
    return AttributeValue(std::string(raw));
  }

  Attribute parse_attribute(XmlToken& t, AttrKind kind, std::size_t depth) {
    if (depth > opts_.max_nesting_depth) {
      throw Error(ErrorCode::DepthExceeded,
                  "attribute nesting deeper than " + std::to_string(opts_.max_nesting_depth) +
                      " at byte offset " + std::to_string(t.offset));
    }
    const std::uint64_t offset = t.offset;
    Attribute attr;
    const auto* key = t.attribute("key");
    if (!key) {
      throw Error(ErrorCode::InvalidAttribute,
                  "attribute <" + std::string(t.name) + "> without key at byte offset " +
                      std::to_string(offset));
    }
    attr.key = tok_.decode_to_string(key->raw_value);
    const auto* value = t.attribute("value");
    const std::string_view raw = value ? tok_.decode(value->raw_value) : std::string_view{};

    switch (kind) {
      case AttrKind::String:
        attr.value = AttributeValue(std::string(raw));
        break;
      case AttrKind::Date:
        attr.value = typed_or_fallback(parse_timestamp(trim(raw)), raw, "date", offset);
        break;
      case AttrKind::Int:
        attr.value = typed_or_fallback(parse_int(raw), raw, "int", offset);
        break;
      case AttrKind::Float:
        attr.value = typed_or_fallback(parse_float(raw), raw, "float", offset);
        break;
      case AttrKind::Boolean:
        attr.value = typed_or_fallback(parse_bool(raw), raw, "boolean", offset);
        break;
      case AttrKind::Id:
        attr.value = AttributeValue(Identifier{std::string(raw)});
        break;
      case AttrKind::List:
        attr.value = AttributeValue(AttributeList{});
        break;
      case AttrKind::Container:
        attr.value = AttributeValue(AttributeMap{});
        break;
      case AttrKind::None:
        break;
    }
    if (t.self_closing) return attr;

    for (;;) {
      XmlToken& c = tok_.next();
      if (c.kind == TokenKind::EndElement) break;
      const std::string_view cname = local_name(c.name);
      if (kind == AttrKind::List && cname == "values") {
        auto& items = std::get<AttributeList>(attr.value.data).items;
        if (!c.self_closing) parse_attribute_items(items, depth + 1);
      } else if (const AttrKind ck = attr_kind(cname); ck != AttrKind::None) {
        Attribute child = parse_attribute(c, ck, depth + 1);
        if (kind == AttrKind::Container) {
          std::get<AttributeMap>(attr.value.data).entries.set(std::move(child));
        } else {
          attr.children.set(std::move(child));
        }
      } else if (!c.self_closing) {
        skip_subtree();
      }
    }
    return attr;
  }

  void sort_events() {
    for (auto& trace : log_.traces) {
      std::stable_sort(trace.events.begin(), trace.events.end(),
                       [](const Event& a, const Event& b) {
                         const auto ta = a.timestamp();
                         const auto tb = b.timestamp();
                         if (ta && tb) return *ta < *tb;
                         return ta.has_value() && !tb.has_value();
                       });
    }
  }

  XmlTokenizer tok_;
  const ImportOptions& opts_;
  EventLog log_;
};

EventLog parse_source(ByteSource& source, const ImportOptions& opts) {
  return XesBuilder(source, opts).run();
}

EventLog parse_gz_source(ByteSource& source, const ImportOptions& opts) {
  detail::GzipSource gz(source);
  return parse_source(gz, opts);
}

}  // namespace

bool has_gzip_magic(std::string_view bytes) noexcept {
  return bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1F &&
         static_cast<unsigned char>(bytes[1]) == 0x8B;
}

EventLog parse_xes(std::string_view xml, const ImportOptions& opts) {
  detail::MemorySource src(xml);
  return parse_source(src, opts);
}

EventLog parse_xes(std::istream& in, const ImportOptions& opts) {
  detail::StreamSource src(in);
  return parse_source(src, opts);
}

EventLog parse_xes_file(const std::filesystem::path& path, const ImportOptions& opts) {
  detail::FileSource src(path);
  return parse_source(src, opts);
}

EventLog parse_xes_gz(std::string_view bytes, const ImportOptions& opts) {
  detail::MemorySource src(bytes);
  return parse_gz_source(src, opts);
}

EventLog parse_xes_gz(std::istream& in, const ImportOptions& opts) {
  detail::StreamSource src(in);
  return parse_gz_source(src, opts);
}

EventLog parse_xes_gz_file(const std::filesystem::path& path, const ImportOptions& opts) {
  detail::FileSource src(path);
  return parse_gz_source(src, opts);
}

EventLog detect_and_parse(const std::filesystem::path& path, const ImportOptions& opts) {
  bool gz = false;
  {
    detail::FileSource probe(path);
    char magic[2];
    std::size_t have = 0;
    while (have < 2) {
      const std::size_t k = probe.read(magic + have, 2 - have);
      if (k == 0) break;
      have += k;
    }
    gz = has_gzip_magic(std::string_view(magic, have));
  }
  return gz ? parse_xes_gz_file(path, opts) : parse_xes_file(path, opts);
}

EventLog detect_and_parse_bytes(std::string_view bytes, const ImportOptions& opts) {
  return has_gzip_magic(bytes) ? parse_xes_gz(bytes, opts) : parse_xes(bytes, opts);
}

}  // namespace pmcore::xes
