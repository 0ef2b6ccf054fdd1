#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace pmcore::detail {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
  std::size_t operator()(const std::string& s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

// FNV-1a over the index sequence.
struct SequenceHash {
  std::size_t operator()(const std::vector<std::uint32_t>& seq) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint32_t v : seq) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace pmcore::detail
