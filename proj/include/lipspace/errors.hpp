#pragma once

#include <stdexcept>
#include <string>

namespace lipspace {

/// Error codes shared between the C++ core and the C API surface.
enum class ErrorCode {
  InvalidArgument = 1,
  Precondition,
  FacesExceedCapacity,
  SiteSeparation,
  WitnessInvalid,
  DepthExhausted,
  ResolutionTooCoarse,
  DirectionNotLipschitz,
  CoverageUncertified,
  UnknownCommand,
  CheckFailed,
  Io,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::FacesExceedCapacity: return "FacesExceedCapacity";
    case ErrorCode::SiteSeparation: return "SiteSeparationError";
    case ErrorCode::WitnessInvalid: return "WitnessInvalid";
    case ErrorCode::DepthExhausted: return "DepthExhausted";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::DirectionNotLipschitz: return "DirectionNotLipschitz";
    case ErrorCode::CoverageUncertified: return "CoverageUncertified";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::CheckFailed: return "CheckFailed";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace lipspace
