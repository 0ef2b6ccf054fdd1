#include "xml_tokenizer.hpp"

#include <cstring>

#include "pmcore/error.hpp"

namespace pmcore::xes::detail {

namespace {

constexpr bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace

XmlTokenizer::XmlTokenizer(ByteSource& source, std::size_t chunk_size)
    : source_(source), buf_(chunk_size) {}

void XmlTokenizer::fail(const std::string& what, std::uint64_t at) const {
  throw Error(ErrorCode::MalformedXml, what + " at byte offset " + std::to_string(at));
}

bool XmlTokenizer::fill_more() {
  if (eof_) return false;
  if (pos_ > 0) {
    std::memmove(buf_.data(), buf_.data() + pos_, len_ - pos_);
    len_ -= pos_;
    consumed_ += pos_;
    pos_ = 0;
  }
  if (len_ == buf_.size()) buf_.resize(buf_.size() * 2);
  const std::size_t k = source_.read(buf_.data() + len_, buf_.size() - len_);
  if (k == 0) {
    eof_ = true;
    return false;
  }
  len_ += k;
  return true;
}

bool XmlTokenizer::ensure(std::size_t n) {
  while (len_ - pos_ < n) {
    if (!fill_more()) return false;
  }
  return true;
}

// Skips past `terminator`, starting at pos_. Returns false at end of input.
bool XmlTokenizer::skip_until(std::string_view terminator) {
  std::size_t rel = 0;
  for (;;) {
    const std::string_view window(buf_.data() + pos_, len_ - pos_);
    const auto hit = window.find(terminator, rel);
    if (hit != std::string_view::npos) {
      pos_ += hit + terminator.size();
      return true;
    }
    rel = window.size() >= terminator.size() ? window.size() - terminator.size() + 1 : 0;
    // Keep the unmatched tail only; the skipped part is never needed again.
    const std::size_t drop = rel;
    pos_ += drop;
    rel = 0;
    if (!fill_more()) return false;
  }
}

// pos_ sits on '<'. On success `end` is the offset of the closing '>'
// relative to pos_.
bool XmlTokenizer::find_tag_end(std::size_t start_rel, std::size_t& end) {
  std::size_t rel = start_rel;
  char quote = 0;
  for (;;) {
    const char* base = buf_.data() + pos_;
    const std::size_t avail = len_ - pos_;
    for (; rel < avail; ++rel) {
      const char c = base[rel];
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '>') {
        end = rel;
        return true;
      } else if (c == '<') {
        fail("unexpected '<' inside tag", offset() + rel);
      }
    }
    if (!fill_more()) return false;
  }
}

XmlToken& XmlTokenizer::next() {
  for (;;) {
    // Character data between tags is ignored.
    for (;;) {
      const void* lt = std::memchr(buf_.data() + pos_, '<', len_ - pos_);
      if (lt) {
        pos_ = static_cast<std::size_t>(static_cast<const char*>(lt) - buf_.data());
        break;
      }
      pos_ = len_;
      if (!fill_more()) {
        if (!open_.empty()) {
          fail("unexpected end of document, <" + open_.back() + "> is not closed", offset());
        }
        token_.kind = TokenKind::EndOfDocument;
        token_.name = {};
        token_.attributes.clear();
        token_.offset = offset();
        return token_;
      }
    }

    const std::uint64_t tag_offset = offset();
    ensure(9);
    const std::string_view head(buf_.data() + pos_, std::min<std::size_t>(9, len_ - pos_));
    if (head.starts_with("<!--")) {
      if (!skip_until("-->")) fail("unterminated comment", tag_offset);
      continue;
    }
    if (head.starts_with("<![CDATA[")) {
      if (!skip_until("]]>")) fail("unterminated CDATA section", tag_offset);
      continue;
    }
    if (head.starts_with("<?")) {
      if (!skip_until("?>")) fail("unterminated processing instruction", tag_offset);
      continue;
    }
    if (head.starts_with("<!")) {
      // DOCTYPE, possibly with an internal subset in brackets.
      int brackets = 0;
      std::size_t rel = 2;
      for (;;) {
        if (pos_ + rel >= len_ && !fill_more()) fail("unterminated declaration", tag_offset);
        const char c = buf_[pos_ + rel];
        if (c == '[') ++brackets;
        if (c == ']') --brackets;
        if (c == '>' && brackets <= 0) break;
        ++rel;
      }
      pos_ += rel + 1;
      continue;
    }

    std::size_t end_rel = 0;
    if (!find_tag_end(1, end_rel)) fail("unterminated tag", tag_offset);
    parse_tag(pos_, pos_ + end_rel);
    token_.offset = tag_offset;
    pos_ += end_rel + 1;
    return token_;
  }
}

void XmlTokenizer::parse_tag(std::size_t start, std::size_t end) {
  const char* p = buf_.data() + start + 1;
  const char* const e = buf_.data() + end;
  const std::uint64_t base_offset = consumed_ + start;
  auto at = [&](const char* q) { return base_offset + static_cast<std::uint64_t>(q - (buf_.data() + start)); };

  token_.attributes.clear();
  token_.self_closing = false;

  if (p < e && *p == '/') {
    ++p;
    const char* name_begin = p;
    while (p < e && !is_space(*p)) ++p;
    const std::string_view name(name_begin, static_cast<std::size_t>(p - name_begin));
    while (p < e && is_space(*p)) ++p;
    if (p != e || name.empty()) fail("malformed end tag", at(name_begin - 2));
    if (open_.empty()) fail("end tag </" + std::string(name) + "> without open element", at(name_begin - 2));
    if (open_.back() != name) {
      fail("mismatched end tag </" + std::string(name) + ">, expected </" + open_.back() + ">",
           at(name_begin - 2));
    }
    end_name_ = std::move(open_.back());
    open_.pop_back();
    token_.kind = TokenKind::EndElement;
    token_.name = end_name_;
    return;
  }

  const char* name_begin = p;
  while (p < e && !is_space(*p) && *p != '/') ++p;
  if (p == name_begin) fail("missing element name", at(name_begin - 1));
  token_.kind = TokenKind::StartElement;
  token_.name = std::string_view(name_begin, static_cast<std::size_t>(p - name_begin));

  for (;;) {
    while (p < e && is_space(*p)) ++p;
    if (p == e) break;
    if (*p == '/') {
      ++p;
      while (p < e && is_space(*p)) ++p;
      if (p != e) fail("unexpected '/' inside tag", at(p));
      token_.self_closing = true;
      break;
    }
    const char* an = p;
    while (p < e && *p != '=' && !is_space(*p) && *p != '/') ++p;
    const std::string_view attr_name(an, static_cast<std::size_t>(p - an));
    while (p < e && is_space(*p)) ++p;
    if (attr_name.empty() || p == e || *p != '=') {
      fail("attribute without value", at(an));
    }
    ++p;
    while (p < e && is_space(*p)) ++p;
    if (p == e || (*p != '"' && *p != '\'')) fail("unquoted attribute value", at(p));
    const char quote = *p++;
    const char* vb = p;
    while (p < e && *p != quote) ++p;
    if (p == e) fail("unterminated attribute value", at(vb));
    token_.attributes.push_back(
        XmlAttribute{attr_name, std::string_view(vb, static_cast<std::size_t>(p - vb))});
    ++p;
  }

  if (!token_.self_closing) open_.emplace_back(token_.name);
}

std::string_view XmlTokenizer::decode(std::string_view raw) {
  if (raw.find('&') == std::string_view::npos) return raw;
  scratch_.clear();
  scratch_.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    const char c = raw[i];
    if (c != '&') {
      scratch_ += c;
      ++i;
      continue;
    }
    const auto semi = raw.find(';', i);
    if (semi == std::string_view::npos || semi - i > 12) {
      fail("unterminated entity reference", offset());
    }
    const std::string_view ent = raw.substr(i + 1, semi - i - 1);
    if (ent == "amp") {
      scratch_ += '&';
    } else if (ent == "lt") {
      scratch_ += '<';
    } else if (ent == "gt") {
      scratch_ += '>';
    } else if (ent == "quot") {
      scratch_ += '"';
    } else if (ent == "apos") {
      scratch_ += '\'';
    } else if (ent.size() >= 2 && ent[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = ent[1] == 'x' || ent[1] == 'X';
      const std::string_view digits = ent.substr(hex ? 2 : 1);
      if (digits.empty()) fail("empty character reference", offset());
      for (char d : digits) {
        std::uint32_t v;
        if (d >= '0' && d <= '9') {
          v = static_cast<std::uint32_t>(d - '0');
        } else if (hex && d >= 'a' && d <= 'f') {
          v = static_cast<std::uint32_t>(d - 'a' + 10);
        } else if (hex && d >= 'A' && d <= 'F') {
          v = static_cast<std::uint32_t>(d - 'A' + 10);
        } else {
          fail("bad character reference '&" + std::string(ent) + ";'", offset());
        }
        cp = cp * (hex ? 16 : 10) + v;
        if (cp > 0x10FFFF) fail("character reference out of range", offset());
      }
      append_utf8(scratch_, cp);
    } else {
      fail("unknown entity '&" + std::string(ent) + ";'", offset());
    }
    i = semi + 1;
  }
  return scratch_;
}

}  // namespace pmcore::xes::detail
