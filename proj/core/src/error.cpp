#include "qflake/error.hpp"

namespace qflake {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::BadLabel: return "BadLabel";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::InvalidEncoding: return "InvalidEncoding";
    case ErrorCode::BadManifest: return "BadManifest";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::RankTooSmall: return "RankTooSmall";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::MinorityTooSmall: return "MinorityTooSmall";
    case ErrorCode::SpecInvalid: return "SpecInvalid";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::BundleInvalid: return "BundleInvalid";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace qflake
