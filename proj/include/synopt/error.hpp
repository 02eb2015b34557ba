// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace synopt {

/// Position of a token in an input text. Line and column are 1-based.
struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t offset = 0;
};

enum class ErrorKind {
  Input,        // malformed input, violated precondition
  ResourceCap,  // a configured size guard was exceeded
  Internal,     // arithmetic or invariant bug (should never fire)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg,
        std::optional<SourceSpan> span = std::nullopt)
      : std::runtime_error(render(msg, span)), kind_(kind), span_(span) {}

  ErrorKind kind() const { return kind_; }
  const std::optional<SourceSpan>& span() const { return span_; }

 private:
  static std::string render(const std::string& msg,
                            const std::optional<SourceSpan>& span) {
    if (!span) return msg;
    return std::to_string(span->line) + ":" + std::to_string(span->column) +
           ": " + msg;
  }

  ErrorKind kind_;
  std::optional<SourceSpan> span_;
};

[[noreturn]] inline void input_error(const std::string& msg,
                                     std::optional<SourceSpan> span =
                                         std::nullopt) {
  throw Error(ErrorKind::Input, msg, span);
}

[[noreturn]] inline void cap_error(const std::string& msg) {
  throw Error(ErrorKind::ResourceCap, msg);
}

[[noreturn]] inline void internal_error(const std::string& msg) {
  throw Error(ErrorKind::Internal, msg);
}

}  // namespace synopt
