#include "pmcore/error.hpp"

namespace pmcore {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::LabelCollision: return "LabelCollision";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::InvalidAttribute: return "InvalidAttribute";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::NotGzip: return "NotGzip";
    case ErrorCode::CorruptArchive: return "CorruptArchive";
    case ErrorCode::Io: return "Io";
    case ErrorCode::UnknownPlace: return "UnknownPlace";
    case ErrorCode::UnknownTransition: return "UnknownTransition";
    case ErrorCode::NotEnabled: return "NotEnabled";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownHandle: return "UnknownHandle";
    case ErrorCode::DoubleDestroy: return "DoubleDestroy";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Internal: return "Internal";
  }
  return "Internal";
}

}  // namespace pmcore
