#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace folcalc {

enum class ErrorKind {
  InvalidArgument,
  DivisionByZero,
  FrameNotUnimodular,
  NotInvolutive,
  DimensionMismatch,
  NotLeafwiseClosed,
  NotPresymplectic,
  NotAnExtension,
  NotBasicDifferential,
  SingularAtPoint,
  NewtonDivergence,
  Unsupported,
  NonIntegerMatrix,
  NonPositiveEigenvalue,
  Parse,
};

std::string_view error_kind_name(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace folcalc
