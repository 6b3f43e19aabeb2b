#include "folcalc/errors.hpp"

namespace folcalc {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FrameNotUnimodular: return "FrameNotUnimodular";
    case ErrorKind::NotInvolutive: return "NotInvolutive";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotLeafwiseClosed: return "NotLeafwiseClosed";
    case ErrorKind::NotPresymplectic: return "NotPresymplectic";
    case ErrorKind::NotAnExtension: return "NotAnExtension";
    case ErrorKind::NotBasicDifferential: return "NotBasicDifferential";
    case ErrorKind::SingularAtPoint: return "SingularAtPoint";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::NonIntegerMatrix: return "NonIntegerMatrix";
    case ErrorKind::NonPositiveEigenvalue: return "NonPositiveEigenvalue";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace folcalc
