#include "dirzero/error.hpp"

namespace dirzero {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedIndex: return "UnsupportedIndex";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::LogSingular: return "LogSingular";
    case ErrorCode::InvalidSequence: return "InvalidSequence";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::GammaOutOfRange: return "GammaOutOfRange";
    case ErrorCode::GammaTooLarge: return "GammaTooLarge";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::DivisorTooSmall: return "DivisorTooSmall";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::NoContraction: return "NoContraction";
    case ErrorCode::NontrivialityFailed: return "NontrivialityFailed";
    case ErrorCode::IndexOverflow: return "IndexOverflow";
    case ErrorCode::BoundaryTooClose: return "BoundaryTooClose";
    case ErrorCode::FarFieldViolation: return "FarFieldViolation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace dirzero
