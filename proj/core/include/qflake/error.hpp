#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qflake {

enum class ErrorCode {
  // corpus
  MissingFile,
  BadLabel,
  DuplicateId,
  EmptyFile,
  InvalidEncoding,
  BadManifest,
  EmptyClass,
  TooFewSamples,
  // linalg
  RankTooSmall,
  DegenerateInput,
  DimensionMismatch,
  NonFinite,
  // resample
  MinorityTooSmall,
  // classifiers
  SpecInvalid,
  KTooLarge,
  SingleClass,
  EmptySet,
  // eval
  LengthMismatch,
  EmptyMatrix,
  EmptyInput,
  EmptyGrid,
  // experiment / cli
  ConfigInvalid,
  BundleInvalid,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable code plus optional per-record
/// diagnostics (used by manifest validation to report every bad record).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> details = {})
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

}  // namespace qflake
