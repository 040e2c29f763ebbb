#include "supertrace/errors.hpp"

namespace supertrace {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OverlappingPieces: return "OverlappingPieces";
    case ErrorCode::ModulatedInput: return "ModulatedInput";
    case ErrorCode::ModulationConflict: return "ModulationConflict";
    case ErrorCode::InvalidStructure: return "InvalidStructure";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::ModeUnsupported: return "ModeUnsupported";
    case ErrorCode::ZeroInnerRadius: return "ZeroInnerRadius";
    case ErrorCode::WindowTouchesAccumulationPoint: return "WindowTouchesAccumulationPoint";
    case ErrorCode::CardinalityMismatch: return "CardinalityMismatch";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::RationalSyntaxError: return "RationalSyntaxError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace supertrace
