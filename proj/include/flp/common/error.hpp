#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flp {

enum class ErrorCode {
  InvalidArgument,
  InvalidMap,
  SinglePointOverflow,
  OutOfMap,
  LoadFailed,
  StreamTooShort,
  UnknownFloor,
  UnknownBeacon,
  NoStairway,
  AllDead,
  NoOverlap,
  InfeasibleScenario,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidMap: return "InvalidMap";
    case ErrorCode::SinglePointOverflow: return "SinglePointOverflow";
    case ErrorCode::OutOfMap: return "OutOfMap";
    case ErrorCode::LoadFailed: return "LoadFailed";
    case ErrorCode::StreamTooShort: return "StreamTooShort";
    case ErrorCode::UnknownFloor: return "UnknownFloor";
    case ErrorCode::UnknownBeacon: return "UnknownBeacon";
    case ErrorCode::NoStairway: return "NoStairway";
    case ErrorCode::AllDead: return "AllDead";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::InfeasibleScenario: return "InfeasibleScenario";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace flp
