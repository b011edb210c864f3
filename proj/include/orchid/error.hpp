#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orchid {

enum class ErrorCode {
  Io,
  Decode,
  EmptyResult,
  DegenerateShape,
  TooFewBoundaryPoints,
  EmptyRegion,
  EmptyMask,
  InvalidMarkers,
  NoObject,
  DimensionMismatch,
  SingleClass,
  NonFinite,
  NonConvergence,
  InsufficientClasses,
  TooFewSamplesPerClass,
  EmptyDataset,
  DuplicateImageId,
  InconsistentTaxonomy,
  Schema,
  UnknownGroup,
  UnsupportedClassCount,
  InvalidArgument,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure surfaced by the library carries one of the codes above so
/// callers (CLI exit codes, HTTP status mapping) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace orchid
