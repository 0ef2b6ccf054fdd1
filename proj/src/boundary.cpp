#include "pmcore/boundary.hpp"

#include "json_dump.hpp"

#include <json.hpp>

#include "pmcore/alphappp.hpp"
#include "pmcore/petri.hpp"

namespace pmcore::boundary {

using json = nlohmann::json;

std::string encode_projection(const ActivityProjection& proj) {
  json variants = json::array();
  for (const auto& v : proj.variants) variants.push_back(json::array({v.activities, v.count}));
  return detail::dump_json(json{{"alphabet", proj.alphabet}, {"variants", std::move(variants)}});
}

ActivityProjection decode_projection(std::string_view text) {
  auto schema = [](const std::string& what) { return Error(ErrorCode::SchemaViolation, what); };
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw schema(std::string("projection JSON does not parse: ") + e.what());
  }
  if (!doc.is_object()) throw schema("projection JSON must be an object");
  if (const auto s = doc.find("schema"); s != doc.end() && *s != kProjectionSchema) {
    throw schema("unsupported projection schema");
  }
  const auto alphabet = doc.find("alphabet");
  const auto variants = doc.find("variants");
  if (alphabet == doc.end() || !alphabet->is_array()) throw schema("'alphabet' must be an array");
  if (variants == doc.end() || !variants->is_array()) throw schema("'variants' must be an array");

  ActivityProjection proj;
  proj.alphabet.reserve(alphabet->size());
  for (const auto& label : *alphabet) {
    if (!label.is_string()) throw schema("alphabet entries must be strings");
    proj.alphabet.push_back(label.get<std::string>());
  }
  proj.variants.reserve(variants->size());
  for (std::size_t i = 0; i < variants->size(); ++i) {
    const json& v = (*variants)[i];
    const std::string where = "variants[" + std::to_string(i) + "]";
    if (!v.is_array() || v.size() != 2 || !v[0].is_array()) {
      throw schema(where + " must be [[indices...], count]");
    }
    if (!v[1].is_number_integer()) throw schema(where + " count must be an integer");
    if (v[1].get<std::int64_t>() < 1 && !v[1].is_number_unsigned()) {
      throw Error(ErrorCode::InvariantViolation, where + " count must be positive");
    }
    Variant out;
    out.count = v[1].get<std::uint64_t>();
    out.activities.reserve(v[0].size());
    for (const auto& idx : v[0]) {
      if (!idx.is_number_integer()) throw schema(where + " indices must be integers");
      if (idx.get<std::int64_t>() < 0 && !idx.is_number_unsigned()) {
        throw Error(ErrorCode::InvariantViolation, where + " has a negative activity index");
      }
      const auto raw = idx.get<std::uint64_t>();
      if (raw >= proj.alphabet.size()) {
        throw Error(ErrorCode::InvariantViolation,
                    where + " references activity index " + std::to_string(raw) +
                        " outside alphabet of size " + std::to_string(proj.alphabet.size()));
      }
      out.activities.push_back(static_cast<ActivityIndex>(raw));
    }
    proj.variants.push_back(std::move(out));
  }
  proj.check_invariants();
  return proj;
}

std::string error_json(ErrorCode code, std::string_view detail) {
  return detail::dump_json(
      json{{"error", std::string(to_string(code))}, {"detail", std::string(detail)}});
}

std::string discover_via_boundary(std::string_view projection_json, std::string_view variant,
                                  unsigned threads) {
  try {
    const ActivityProjection proj = decode_projection(projection_json);
    alphappp::Config cfg = alphappp::parse_variant(variant);
    cfg.threads = threads;
    return to_json(alphappp::discover(proj, cfg));
  } catch (const Error& e) {
    return error_json(e.code(), e.what());
  } catch (const std::exception& e) {
    return error_json(ErrorCode::Internal, e.what());
  }
}

// ---------------------------------------------------------------------------
// HandleRegistry
// ---------------------------------------------------------------------------

LogHandle HandleRegistry::register_log(EventLog log) {
  auto release = std::make_shared<Release>();
  std::shared_ptr<const EventLog> owned(new EventLog(std::move(log)),
                                        [release](const EventLog* p) {
                                          delete p;
                                          {
                                            std::lock_guard lock(release->mutex);
                                            release->done = true;
                                          }
                                          release->cv.notify_all();
                                        });
  std::lock_guard lock(mutex_);
  const LogHandle h = next_++;
  live_.emplace(h, Entry{std::move(owned), std::move(release)});
  return h;
}

std::shared_ptr<const EventLog> HandleRegistry::resolve(LogHandle h) const {
  std::lock_guard lock(mutex_);
  const auto it = live_.find(h);
  if (it == live_.end()) {
    throw Error(ErrorCode::UnknownHandle, "unknown log handle " + std::to_string(h));
  }
  return it->second.log;
}

void HandleRegistry::destroy(LogHandle h) {
  std::shared_ptr<Release> release;
  {
    std::lock_guard lock(mutex_);
    const auto it = live_.find(h);
    if (it == live_.end()) {
      if (h != kInvalidHandle && h < next_) {
        throw Error(ErrorCode::DoubleDestroy, "log handle " + std::to_string(h) +
                                                  " was already destroyed");
      }
      throw Error(ErrorCode::UnknownHandle, "unknown log handle " + std::to_string(h));
    }
    release = it->second.release;
    live_.erase(it);
  }
  std::unique_lock lock(release->mutex);
  release->cv.wait(lock, [&] { return release->done; });
}

std::size_t HandleRegistry::live_count() const {
  std::lock_guard lock(mutex_);
  return live_.size();
}

LogHandle HandleRegistry::next_id() const {
  std::lock_guard lock(mutex_);
  return next_;
}

HandleRegistry& global_registry() {
  static HandleRegistry registry;
  return registry;
}

}  // namespace pmcore::boundary
