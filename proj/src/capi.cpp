#include "pmcore/pmcore.h"

#include "json_dump.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "pmcore/alphappp.hpp"
#include "pmcore/boundary.hpp"
#include "pmcore/petri.hpp"
#include "pmcore/xes.hpp"

namespace {

using json = nlohmann::json;
using pmcore::Error;
using pmcore::ErrorCode;
namespace boundary = pmcore::boundary;

char* dup_string(std::string_view s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

pmcore_status status_of(ErrorCode code) noexcept {
  return static_cast<pmcore_status>(static_cast<int>(code) + 1);
}

pmcore_status report(ErrorCode code, std::string_view detail, char** slot) noexcept {
  if (slot) {
    try {
      *slot = dup_string(boundary::error_json(code, detail));
    } catch (...) {
      *slot = nullptr;
    }
  }
  return status_of(code);
}

// Runs `body`, translating exceptions into a status and an error document.
template <typename Body>
pmcore_status guarded(char** error_slot, Body&& body) noexcept {
  try {
    return body();
  } catch (const Error& e) {
    return report(e.code(), e.what(), error_slot);
  } catch (const std::bad_alloc&) {
    return report(ErrorCode::Internal, "out of memory", error_slot);
  } catch (const std::exception& e) {
    return report(ErrorCode::Internal, e.what(), error_slot);
  } catch (...) {
    return report(ErrorCode::Internal, "unknown failure", error_slot);
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

pmcore_status emit(std::string_view text, char** out) {
  *out = dup_string(text);
  if (!*out) throw std::bad_alloc();
  return PMCORE_OK;
}

json attributes_json(const pmcore::Attributes& attrs) {
  json arr = json::array();
  for (const auto& a : attrs) arr.push_back(json::parse(pmcore::xes::nested_attribute_json(a)));
  return arr;
}

}  // namespace

extern "C" {

const char* pmcore_version(void) { return "1.0.0"; }

const char* pmcore_status_name(pmcore_status status) {
  if (status == PMCORE_OK) return "Ok";
  const int raw = static_cast<int>(status);
  if (raw < 1 || raw > static_cast<int>(ErrorCode::Internal) + 1) return "Unknown";
  return pmcore::to_string(static_cast<ErrorCode>(raw - 1)).data();
}

void pmcore_string_free(char* s) { std::free(s); }

pmcore_status pmcore_load_log(const char* path, pmcore_log_handle* handle, char** error) {
  return guarded(error, [&] {
    require(path != nullptr && handle != nullptr, "path and handle must not be NULL");
    *handle = boundary::global_registry().register_log(pmcore::xes::detect_and_parse(path));
    return PMCORE_OK;
  });
}

pmcore_status pmcore_load_log_bytes(const uint8_t* data, size_t len, pmcore_log_handle* handle,
                                    char** error) {
  return guarded(error, [&] {
    require(handle != nullptr, "handle must not be NULL");
    require(data != nullptr || len == 0, "data must not be NULL");
    const std::string_view bytes(reinterpret_cast<const char*>(data), len);
    *handle = boundary::global_registry().register_log(pmcore::xes::detect_and_parse_bytes(bytes));
    return PMCORE_OK;
  });
}

pmcore_status pmcore_destroy_log(pmcore_log_handle handle, char** error) {
  return guarded(error, [&] {
    boundary::global_registry().destroy(handle);
    return PMCORE_OK;
  });
}

pmcore_status pmcore_log_stats(pmcore_log_handle handle, char** out) {
  return guarded(out, [&] {
    require(out != nullptr, "out must not be NULL");
    const auto log = boundary::global_registry().resolve(handle);
    const auto s = pmcore::log_stats(*log);
    return emit(json{{"events", s.events},
                     {"activities", s.activities},
                     {"cases", s.cases},
                     {"variants", s.variants}}
                    .dump(),
                out);
  });
}

pmcore_status pmcore_log_projection(pmcore_log_handle handle, const char* classifier_keys_json,
                                    char** out) {
  return guarded(out, [&] {
    require(out != nullptr, "out must not be NULL");
    std::vector<std::string> keys{std::string(pmcore::kActivityKey)};
    if (classifier_keys_json) {
      const json parsed = json::parse(classifier_keys_json, nullptr, false);
      if (parsed.is_discarded() || !parsed.is_array() || parsed.empty()) {
        throw Error(ErrorCode::InvalidArgument, "classifier keys must be a non-empty JSON array");
      }
      keys.clear();
      for (const auto& k : parsed) {
        if (!k.is_string() || k.get<std::string>().empty()) {
          throw Error(ErrorCode::InvalidArgument, "classifier keys must be non-empty strings");
        }
        keys.push_back(k.get<std::string>());
      }
    }
    const auto log = boundary::global_registry().resolve(handle);
    return emit(boundary::encode_projection(pmcore::project(*log, keys)), out);
  });
}

pmcore_status pmcore_log_event_table(pmcore_log_handle handle, const char* format, char** out) {
  return guarded(out, [&] {
    require(out != nullptr, "out must not be NULL");
    const std::string_view fmt = format ? format : "json";
    require(fmt == "json" || fmt == "csv", "format must be \"json\" or \"csv\"");
    const auto log = boundary::global_registry().resolve(handle);
    const auto table = pmcore::xes::to_event_table(*log);
    return emit(fmt == "csv" ? pmcore::xes::to_csv(table) : pmcore::xes::to_columnar_json(table),
                out);
  });
}

pmcore_status pmcore_log_metadata(pmcore_log_handle handle, char** out) {
  return guarded(out, [&] {
    require(out != nullptr, "out must not be NULL");
    const auto log = boundary::global_registry().resolve(handle);
    json extensions = json::array();
    for (const auto& e : log->extensions) {
      extensions.push_back(json{{"name", e.name}, {"prefix", e.prefix}, {"uri", e.uri}});
    }
    json classifiers = json::array();
    for (const auto& c : log->classifiers) {
      classifiers.push_back(json{{"name", c.name}, {"keys", c.keys}});
    }
    return emit(pmcore::detail::dump_json(json{{"attributes", attributes_json(log->attributes)},
                                               {"global_trace", attributes_json(log->global_trace_attrs)},
                                               {"global_event", attributes_json(log->global_event_attrs)},
                                               {"extensions", std::move(extensions)},
                                               {"classifiers", std::move(classifiers)}}),
                out);
  });
}

size_t pmcore_live_log_count(void) { return boundary::global_registry().live_count(); }

pmcore_status pmcore_projection_normalize(const char* projection_json, char** out) {
  return guarded(out, [&] {
    require(out != nullptr && projection_json != nullptr, "arguments must not be NULL");
    return emit(boundary::encode_projection(boundary::decode_projection(projection_json)), out);
  });
}

pmcore_status pmcore_discover(const char* projection_json, const char* variant, unsigned threads,
                              char** out) {
  return guarded(out, [&] {
    require(out != nullptr && projection_json != nullptr && variant != nullptr,
            "arguments must not be NULL");
    const auto proj = boundary::decode_projection(projection_json);
    auto cfg = pmcore::alphappp::parse_variant(variant);
    cfg.threads = threads;
    return emit(pmcore::to_json(pmcore::alphappp::discover(proj, cfg)), out);
  });
}

pmcore_status pmcore_discover_log(pmcore_log_handle handle, const char* variant, unsigned threads,
                                  const char* format, char** out, char** report_out) {
  return guarded(out, [&] {
    require(out != nullptr && variant != nullptr, "arguments must not be NULL");
    const std::string_view fmt = format ? format : "json";
    require(fmt == "json" || fmt == "pnml", "format must be \"json\" or \"pnml\"");
    auto cfg = pmcore::alphappp::parse_variant(variant);
    cfg.threads = threads;
    const auto log = boundary::global_registry().resolve(handle);
    const auto result = pmcore::alphappp::discover_detailed(pmcore::project(*log), cfg);
    if (report_out) {
      const auto& t = result.timings;
      const auto& c = result.counts;
      *report_out = dup_string(
          json{{"timings",
                {{"dfg", t.dfg.count()},
                 {"candidates", t.candidates.count()},
                 {"balance", t.balance.count()},
                 {"replay", t.replay.count()},
                 {"assemble", t.assemble.count()}}},
               {"counts",
                {{"df_relations", c.df_relations},
                 {"df_relations_kept", c.df_relations_kept},
                 {"candidates", c.candidates},
                 {"after_balance", c.after_balance},
                 {"after_replay", c.after_replay}}}}
              .dump());
    }
    return emit(fmt == "pnml" ? pmcore::to_pnml(result.net) : pmcore::to_json(result.net), out);
  });
}

pmcore_status pmcore_net_convert(const char* net_json, const char* format, char** out) {
  return guarded(out, [&] {
    require(out != nullptr && net_json != nullptr, "arguments must not be NULL");
    const std::string_view fmt = format ? format : "json";
    require(fmt == "json" || fmt == "pnml", "format must be \"json\" or \"pnml\"");
    const auto apn = pmcore::from_json(net_json);
    return emit(fmt == "pnml" ? pmcore::to_pnml(apn) : pmcore::to_json(apn), out);
  });
}

}  // extern "C"
