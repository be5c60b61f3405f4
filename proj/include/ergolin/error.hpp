#pragma once

#include <stdexcept>
#include <string>

namespace ergolin {

enum class ErrorKind {
  Config,        // malformed or unknown configuration
  Precondition,  // operation called outside its domain
  Precision,     // working precision exhausted
  Horizon,       // bit stream or buffer too short for the request
  Size,          // truncation dimension too small
  Unsupported,   // input outside the implemented class
  Internal,      // two independent routes disagree
};

const char* error_kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace ergolin
