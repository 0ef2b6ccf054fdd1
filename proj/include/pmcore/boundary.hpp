#pragma once

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "pmcore/error.hpp"
#include "pmcore/event_log.hpp"

namespace pmcore::boundary {

inline constexpr std::string_view kProjectionSchema = "pmcore-proj/1";
inline constexpr std::string_view kErrorSchema = "pmcore-err/1";

/// {"alphabet":[...],"variants":[[[indices...],count],...]}
std::string encode_projection(const ActivityProjection& proj);

/// Throws SchemaViolation for structurally wrong JSON and InvariantViolation
/// when the payload breaks a projection invariant.
ActivityProjection decode_projection(std::string_view text);

/// {"error":"<code>","detail":"<text>"}
std::string error_json(ErrorCode code, std::string_view detail);

/// Decodes the projection, parses the variant string, runs discovery and
/// returns the net as "pmcore-apn/1" JSON. Failures come back as error JSON;
/// this function does not throw.
std::string discover_via_boundary(std::string_view projection_json, std::string_view variant,
                                  unsigned threads = 0);

using LogHandle = std::uint64_t;
inline constexpr LogHandle kInvalidHandle = 0;

/// Thread-safe owner of event logs kept alive across boundary calls.
/// Handles are issued from a counter starting at 1 and never reused, so a
/// stale handle is always detected.
class HandleRegistry {
 public:
  HandleRegistry() = default;
  HandleRegistry(const HandleRegistry&) = delete;
  HandleRegistry& operator=(const HandleRegistry&) = delete;

  LogHandle register_log(EventLog log);

  /// Read-only view that keeps the log alive while held. Throws
  /// UnknownHandle for handles never issued or already destroyed.
  std::shared_ptr<const EventLog> resolve(LogHandle h) const;

  /// Releases the log, blocking until outstanding views are dropped. Throws
  /// UnknownHandle for never-issued ids and DoubleDestroy for a second call.
  void destroy(LogHandle h);

  std::size_t live_count() const;
  LogHandle next_id() const;

 private:
  struct Release {
    std::mutex mutex;
    std::condition_variable cv;
    bool done = false;
  };
  struct Entry {
    std::shared_ptr<const EventLog> log;
    std::shared_ptr<Release> release;
  };

  mutable std::mutex mutex_;
  std::unordered_map<LogHandle, Entry> live_;
  LogHandle next_ = 1;
};

/// Process-wide registry used by the C API.
HandleRegistry& global_registry();

}  // namespace pmcore::boundary
