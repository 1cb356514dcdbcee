#pragma once

#include <string>
#include <string_view>
#include <unordered_map>

#include <json.hpp>

#include "flp/common/error.hpp"

namespace flp {

/// Parsed JSON document that remembers the source line of every value, keyed
/// by JSON pointer ("/floors/0/walls/3"). Used to report validation errors
/// against the line the offending value starts on.
class LocatedJson {
 public:
  /// Throws Error(ParseError) with line/column on malformed input.
  static LocatedJson parse(std::string_view text, std::string source_name);
  /// Reads and parses a file; throws Error(IoError) if it cannot be read.
  static LocatedJson load(const std::string& path);

  const nlohmann::json& root() const noexcept { return root_; }
  const std::string& source() const noexcept { return source_; }

  /// Line of the value at pointer, or of the nearest located ancestor.
  int line_of(std::string_view pointer) const;

  /// "source:line: pointer: message"
  std::string describe(std::string_view pointer, std::string_view message) const;

  /// Throws Error(code) with describe(pointer, message).
  [[noreturn]] void reject(std::string_view pointer, std::string_view message,
                           ErrorCode code = ErrorCode::InvalidMap) const;

 private:
  nlohmann::json root_;
  std::string source_;
  std::unordered_map<std::string, int> lines_;
};

}  // namespace flp
