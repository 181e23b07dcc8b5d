#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wfkdv {

enum class ErrorCode {
  InvalidArgument,
  NonFiniteMultiplier,
  GridMismatch,
  ZeroNonlinearity,
  UnsupportedDerivative,
  NotASoliton,
  UnderResolvedWindow,
  StabilityViolation,
  NonFinite,
  EnergyLawViolation,
  StepUnderflow,
  NoConvergence,
  UnderResolved,
  UnknownSupport,
  NoSpectralClosure,
  NoPhysicalClosure,
  GridTooCoarse,
  SweepTooShort,
  CalibrationGapTooSmall,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying one of the library's error kinds.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteMultiplier: return "NonFiniteMultiplier";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ZeroNonlinearity: return "ZeroNonlinearity";
    case ErrorCode::UnsupportedDerivative: return "UnsupportedDerivative";
    case ErrorCode::NotASoliton: return "NotASoliton";
    case ErrorCode::UnderResolvedWindow: return "UnderResolvedWindow";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::EnergyLawViolation: return "EnergyLawViolation";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::UnderResolved: return "UnderResolved";
    case ErrorCode::UnknownSupport: return "UnknownSupport";
    case ErrorCode::NoSpectralClosure: return "NoSpectralClosure";
    case ErrorCode::NoPhysicalClosure: return "NoPhysicalClosure";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::SweepTooShort: return "SweepTooShort";
    case ErrorCode::CalibrationGapTooSmall: return "CalibrationGapTooSmall";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace wfkdv
