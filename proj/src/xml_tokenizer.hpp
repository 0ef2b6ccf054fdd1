#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "byte_source.hpp"

namespace pmcore::xes::detail {

struct XmlAttribute {
  std::string_view name;
  std::string_view raw_value;  // entity references not yet decoded
};

enum class TokenKind { StartElement, EndElement, EndOfDocument };

/// Views in a token stay valid until the next call to XmlTokenizer::next().
struct XmlToken {
  TokenKind kind = TokenKind::EndOfDocument;
  std::string_view name;
  std::vector<XmlAttribute> attributes;
  bool self_closing = false;
  std::uint64_t offset = 0;  // byte offset of '<'

  const XmlAttribute* attribute(std::string_view attr_name) const noexcept {
    for (const auto& a : attributes) {
      if (a.name == attr_name) return &a;
    }
    return nullptr;
  }
};

/// Minimal streaming XML pull tokenizer. Emits element starts and ends only;
/// character data, comments, processing instructions, CDATA sections and the
/// DOCTYPE are skipped. A self-closing element yields a StartElement with
/// `self_closing` set and no matching EndElement. Tag balance is enforced.
class XmlTokenizer {
 public:
  explicit XmlTokenizer(ByteSource& source, std::size_t chunk_size = 1 << 18);

  XmlToken& next();

  std::size_t depth() const noexcept { return open_.size(); }
  std::uint64_t offset() const noexcept { return consumed_ + pos_; }

  /// Decodes the five predefined entities and numeric character references.
  /// Returns `raw` unchanged (no copy into scratch) when there is nothing to
  /// decode. Throws MalformedXml on a bad reference.
  std::string_view decode(std::string_view raw);
  std::string decode_to_string(std::string_view raw) { return std::string(decode(raw)); }

  [[noreturn]] void fail(const std::string& what, std::uint64_t at) const;

 private:
  bool fill_more();
  bool ensure(std::size_t n);
  bool find_tag_end(std::size_t start, std::size_t& end);
  bool skip_until(std::string_view terminator);
  void parse_tag(std::size_t start, std::size_t end);

  ByteSource& source_;
  std::vector<char> buf_;
  std::size_t pos_ = 0;
  std::size_t len_ = 0;
  std::uint64_t consumed_ = 0;  // bytes discarded before buf_[0]
  bool eof_ = false;
  std::vector<std::string> open_;
  XmlToken token_;
  std::string scratch_;
  std::string end_name_;
};

}  // namespace pmcore::xes::detail
