#include "byte_source.hpp"

#include <algorithm>
#include <cstring>

#include "pmcore/error.hpp"

namespace pmcore::xes::detail {

std::size_t MemorySource::read(char* out, std::size_t n) {
  const std::size_t k = std::min(n, bytes_.size() - pos_);
  std::memcpy(out, bytes_.data() + pos_, k);
  pos_ += k;
  return k;
}

std::size_t StreamSource::read(char* out, std::size_t n) {
  in_.read(out, static_cast<std::streamsize>(n));
  const auto k = static_cast<std::size_t>(in_.gcount());
  if (k == 0 && in_.bad()) throw Error(ErrorCode::Io, "stream read failed");
  return k;
}

FileSource::FileSource(const std::filesystem::path& path)
    : file_(std::fopen(path.c_str(), "rb")), path_(path) {
  if (!file_) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
}

std::size_t FileSource::read(char* out, std::size_t n) {
  const std::size_t k = std::fread(out, 1, n, file_.get());
  if (k < n && std::ferror(file_.get())) {
    throw Error(ErrorCode::Io, "read error on '" + path_.string() + "'");
  }
  return k;
}

namespace {
constexpr std::size_t kGzipChunk = 1 << 16;
}

GzipSource::GzipSource(ByteSource& inner) : inner_(inner), in_buf_(kGzipChunk) {
  // Make sure both magic bytes are buffered before checking them.
  std::size_t have = 0;
  while (have < 2) {
    const std::size_t k =
        inner_.read(reinterpret_cast<char*>(in_buf_.data()) + have, in_buf_.size() - have);
    if (k == 0) break;
    have += k;
  }
  if (have < 2 || in_buf_[0] != 0x1F || in_buf_[1] != 0x8B) {
    throw Error(ErrorCode::NotGzip, "input does not start with gzip magic bytes 1f 8b");
  }
  zs_.next_in = in_buf_.data();
  zs_.avail_in = static_cast<uInt>(have);
  if (inflateInit2(&zs_, 16 + MAX_WBITS) != Z_OK) {
    throw Error(ErrorCode::Internal, "inflateInit2 failed");
  }
}

GzipSource::~GzipSource() { inflateEnd(&zs_); }

bool GzipSource::refill() {
  if (inner_eof_) return false;
  const std::size_t k = inner_.read(reinterpret_cast<char*>(in_buf_.data()), in_buf_.size());
  if (k == 0) {
    inner_eof_ = true;
    return false;
  }
  zs_.next_in = in_buf_.data();
  zs_.avail_in = static_cast<uInt>(k);
  return true;
}

std::size_t GzipSource::read(char* out, std::size_t n) {
  if (finished_ || n == 0) return 0;
  zs_.next_out = reinterpret_cast<Bytef*>(out);
  zs_.avail_out = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
  const uInt requested = zs_.avail_out;

  while (zs_.avail_out > 0) {
    if (member_done_) {
      // Another member may follow; anything else is trailing data we ignore.
      if (zs_.avail_in == 0 && !refill()) {
        finished_ = true;
        break;
      }
      if (zs_.next_in[0] != 0x1F) {
        finished_ = true;
        break;
      }
      inflateReset(&zs_);
      member_done_ = false;
    }
    if (zs_.avail_in == 0 && !refill()) {
      throw Error(ErrorCode::CorruptArchive, "gzip stream truncated before end of member");
    }
    const int ret = inflate(&zs_, Z_NO_FLUSH);
    if (ret == Z_STREAM_END) {
      member_done_ = true;
    } else if (ret == Z_BUF_ERROR) {
      continue;  // needs more input; loop refills
    } else if (ret != Z_OK) {
      throw Error(ErrorCode::CorruptArchive,
                  std::string("gzip data corrupt: ") + (zs_.msg ? zs_.msg : "unknown error"));
    }
  }
  return requested - zs_.avail_out;
}

}  // namespace pmcore::xes::detail
