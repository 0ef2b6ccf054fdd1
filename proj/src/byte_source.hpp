#pragma once

#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <istream>
#include <memory>
#include <string_view>
#include <vector>

#include <zlib.h>

namespace pmcore::xes::detail {

/// Pull-based byte producer. read() returns 0 only at end of input.
class ByteSource {
 public:
  virtual ~ByteSource() = default;
  virtual std::size_t read(char* out, std::size_t n) = 0;
};

class MemorySource final : public ByteSource {
 public:
  explicit MemorySource(std::string_view bytes) : bytes_(bytes) {}
  std::size_t read(char* out, std::size_t n) override;

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

class StreamSource final : public ByteSource {
 public:
  explicit StreamSource(std::istream& in) : in_(in) {}
  std::size_t read(char* out, std::size_t n) override;

 private:
  std::istream& in_;
};

class FileSource final : public ByteSource {
 public:
  /// Throws Io when the file cannot be opened.
  explicit FileSource(const std::filesystem::path& path);
  std::size_t read(char* out, std::size_t n) override;

 private:
  struct Closer {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
  };
  std::unique_ptr<std::FILE, Closer> file_;
  std::filesystem::path path_;
};

/// Streaming gunzip over another source. Concatenated gzip members are
/// decoded back to back.
class GzipSource final : public ByteSource {
 public:
  /// Throws NotGzip if the inner source does not start with 0x1F 0x8B.
  explicit GzipSource(ByteSource& inner);
  ~GzipSource() override;
  GzipSource(const GzipSource&) = delete;
  GzipSource& operator=(const GzipSource&) = delete;

  std::size_t read(char* out, std::size_t n) override;

 private:
  bool refill();

  ByteSource& inner_;
  z_stream zs_{};
  std::vector<unsigned char> in_buf_;
  bool inner_eof_ = false;
  bool member_done_ = false;
  bool finished_ = false;
};

}  // namespace pmcore::xes::detail
