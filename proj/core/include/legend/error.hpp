#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace legend {

enum class ErrorCode {
  FileNotFound,
  UnsupportedFormat,
  CorruptData,
  IoError,
  InvalidArgument,
  InvalidSigma,
  ImageTooSmall,
  CenterOutOfBounds,
  WindowDegenerate,
  EmptyClass,
  DimensionMismatch,
  InvalidC,
  TooFewExamples,
  FormatVersionMismatch,
  ChecksumMismatch,
  ConfigMismatch,
  UnknownSymbol,
  ConstraintViolation,
  EmptyWord,
  EmptyGrid,
  EmptyLexicon,
  BadLabel,
  EmptyManifest,
  EmptyTestSet,
  EmptyMatrix,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace legend
