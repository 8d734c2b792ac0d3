#pragma once

#include <stdexcept>
#include <string>

namespace fockforge {

// Numeric values are mirrored by ff_status in fockforge.h.
enum class ErrorCode {
  InvalidArgument = 1,
  BasisMismatch = 2,
  MemoryGuard = 3,
  TailBound = 4,
  Normalization = 5,
  Parse = 6,
  Config = 7,
  Io = 8,
  Numeric = 9,
  Internal = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace fockforge
