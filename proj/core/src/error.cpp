#include "legend/error.hpp"

namespace legend {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptData: return "CorruptData";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSigma: return "InvalidSigma";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::CenterOutOfBounds: return "CenterOutOfBounds";
    case ErrorCode::WindowDegenerate: return "WindowDegenerate";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidC: return "InvalidC";
    case ErrorCode::TooFewExamples: return "TooFewExamples";
    case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::EmptyWord: return "EmptyWord";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::EmptyLexicon: return "EmptyLexicon";
    case ErrorCode::BadLabel: return "BadLabel";
    case ErrorCode::EmptyManifest: return "EmptyManifest";
    case ErrorCode::EmptyTestSet: return "EmptyTestSet";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace legend
