#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace morphkit {

enum class Errc {
  // files and parsing
  MissingFile,
  UnsupportedFormat,
  CorruptData,
  ParseError,
  IoError,
  // landmarks
  WrongPointCount,
  PointOutOfBounds,
  DegenerateSegment,
  CardinalityMismatch,
  // geometry and warping
  NonPositiveSigma,
  AnnulusOutOfBounds,
  DegenerateRadii,
  TooFewPoints,
  AllCollinear,
  DegenerateSourceTriangle,
  CoverageGap,
  NoSegments,
  DimensionMismatch,
  // blending
  EmptyAnnulus,
  SolverDiverged,
  FlowOverflow,
  // augmentation
  NonPositiveLength,
  BadFraction,
  // dataset
  DuplicateId,
  BadRatios,
  InfeasibleConstraints,
  InsufficientPairs,
  // networks
  ShapeMismatch,
  NoForwardCache,
  EmptyDataset,
  TooFewFCLayers,
  // attacks and relevance
  OracleUnavailable,
  NoCorrectlyDetectedMorphs,
  BelowGate,
  EmptyList,
  ZeroRegionRelevance,
  // configuration
  InvalidArgument,
};

/// Coarse grouping used by the command-line tool to pick an exit code.
enum class ErrorCategory { Config, Data, Numeric };

std::string_view errc_name(Errc code) noexcept;
ErrorCategory errc_category(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace morphkit
