#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace supertrace {

enum class ErrorCode {
  OverlappingPieces,
  ModulatedInput,
  ModulationConflict,
  InvalidStructure,
  NotCoprime,
  InvalidIndex,
  InvalidArgument,
  InvalidPoint,
  ModeUnsupported,
  ZeroInnerRadius,
  WindowTouchesAccumulationPoint,
  CardinalityMismatch,
  SchemaError,
  RationalSyntaxError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// command-line layer can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace supertrace
