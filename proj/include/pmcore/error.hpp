#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmcore {

/// Error categories shared by every module. The names double as the
/// `error` field of the structured error JSON at the boundary.
enum class ErrorCode {
  // event-core
  LabelCollision,
  // xes-io
  MalformedXml,
  InvalidAttribute,
  DepthExceeded,
  NotGzip,
  CorruptArchive,
  Io,
  // petri
  UnknownPlace,
  UnknownTransition,
  NotEnabled,
  SchemaViolation,
  InvariantViolation,
  // alphappp
  ParseError,
  InvalidLabel,
  InvalidConfig,
  // boundary
  UnknownHandle,
  DoubleDestroy,
  InvalidArgument,
  Internal,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view detail() const noexcept { return what(); }

 private:
  ErrorCode code_;
};

}  // namespace pmcore
