#pragma once

#include <string>

#include <json.hpp>

namespace pmcore::detail {

// Invalid UTF-8 in attribute text is replaced rather than rejected.
inline std::string dump_json(const nlohmann::json& j, int indent = -1) {
  return j.dump(indent, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace pmcore::detail
