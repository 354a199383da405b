#pragma once

#include <stdexcept>
#include <string>

namespace fanih {

// Every failure the library reports carries one of these kinds.  The CLI maps
// them onto exit codes through error_category().
enum class ErrorKind {
  // malformed or inconsistent input
  InvalidInput,
  OverlappingCones,
  NotAFace,
  DegenerateRay,
  MixedDimension,
  RayNotInterior,
  RayNotOpposite,
  NotASubdivision,
  NotPiecewiseLinear,
  SourceNotSimplicial,
  NotSymmetric,
  OddDegree,
  DimensionMismatch,
  CapTooLow,
  RefinementNotSimplicial,
  NoLocalProduct,
  NotASection,
  // hypotheses that could not be certified
  NotConvex,
  NotQuasiConvex,
  NotComplete,
  NotStrictlyConvex,
  NotRelativelyConvex,
  NotPointed,
  HLFailed,
  // internal consistency checks that should never fire
  FreenessCheckFailed,
  SumRuleViolation,
  DenominatorNotCleared,
  DegenerateRestriction,
  PairingDegenerate,
  KernelNotPreserved,
  GeneratorDegreeBound,
  OracleMismatch,
};

enum class ErrorCategory { Input, Hypothesis, Internal };

inline const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::OverlappingCones: return "OverlappingCones";
    case ErrorKind::NotAFace: return "NotAFace";
    case ErrorKind::DegenerateRay: return "DegenerateRay";
    case ErrorKind::MixedDimension: return "MixedDimension";
    case ErrorKind::RayNotInterior: return "RayNotInterior";
    case ErrorKind::RayNotOpposite: return "RayNotOpposite";
    case ErrorKind::NotASubdivision: return "NotASubdivision";
    case ErrorKind::NotPiecewiseLinear: return "NotPiecewiseLinear";
    case ErrorKind::SourceNotSimplicial: return "SourceNotSimplicial";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::OddDegree: return "OddDegree";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::CapTooLow: return "CapTooLow";
    case ErrorKind::RefinementNotSimplicial: return "RefinementNotSimplicial";
    case ErrorKind::NoLocalProduct: return "NoLocalProduct";
    case ErrorKind::NotASection: return "NotASection";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::NotQuasiConvex: return "NotQuasiConvex";
    case ErrorKind::NotComplete: return "NotComplete";
    case ErrorKind::NotStrictlyConvex: return "NotStrictlyConvex";
    case ErrorKind::NotRelativelyConvex: return "NotRelativelyConvex";
    case ErrorKind::NotPointed: return "NotPointed";
    case ErrorKind::HLFailed: return "HLFailed";
    case ErrorKind::FreenessCheckFailed: return "FreenessCheckFailed";
    case ErrorKind::SumRuleViolation: return "SumRuleViolation";
    case ErrorKind::DenominatorNotCleared: return "DenominatorNotCleared";
    case ErrorKind::DegenerateRestriction: return "DegenerateRestriction";
    case ErrorKind::PairingDegenerate: return "PairingDegenerate";
    case ErrorKind::KernelNotPreserved: return "KernelNotPreserved";
    case ErrorKind::GeneratorDegreeBound: return "GeneratorDegreeBound";
    case ErrorKind::OracleMismatch: return "OracleMismatch";
  }
  return "Unknown";
}

inline ErrorCategory error_category(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotConvex:
    case ErrorKind::NotQuasiConvex:
    case ErrorKind::NotComplete:
    case ErrorKind::NotStrictlyConvex:
    case ErrorKind::NotRelativelyConvex:
    case ErrorKind::NotPointed:
    case ErrorKind::HLFailed:
      return ErrorCategory::Hypothesis;
    case ErrorKind::FreenessCheckFailed:
    case ErrorKind::SumRuleViolation:
    case ErrorKind::DenominatorNotCleared:
    case ErrorKind::DegenerateRestriction:
    case ErrorKind::PairingDegenerate:
    case ErrorKind::KernelNotPreserved:
    case ErrorKind::GeneratorDegreeBound:
    case ErrorKind::OracleMismatch:
      return ErrorCategory::Internal;
    default:
      return ErrorCategory::Input;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace fanih
