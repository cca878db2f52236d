#include "morphkit/error.hpp"

namespace morphkit {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MissingFile: return "MissingFile";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::CorruptData: return "CorruptData";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    case Errc::WrongPointCount: return "WrongPointCount";
    case Errc::PointOutOfBounds: return "PointOutOfBounds";
    case Errc::DegenerateSegment: return "DegenerateSegment";
    case Errc::CardinalityMismatch: return "CardinalityMismatch";
    case Errc::NonPositiveSigma: return "NonPositiveSigma";
    case Errc::AnnulusOutOfBounds: return "AnnulusOutOfBounds";
    case Errc::DegenerateRadii: return "DegenerateRadii";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::AllCollinear: return "AllCollinear";
    case Errc::DegenerateSourceTriangle: return "DegenerateSourceTriangle";
    case Errc::CoverageGap: return "CoverageGap";
    case Errc::NoSegments: return "NoSegments";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyAnnulus: return "EmptyAnnulus";
    case Errc::SolverDiverged: return "SolverDiverged";
    case Errc::FlowOverflow: return "FlowOverflow";
    case Errc::NonPositiveLength: return "NonPositiveLength";
    case Errc::BadFraction: return "BadFraction";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::BadRatios: return "BadRatios";
    case Errc::InfeasibleConstraints: return "InfeasibleConstraints";
    case Errc::InsufficientPairs: return "InsufficientPairs";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NoForwardCache: return "NoForwardCache";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::TooFewFCLayers: return "TooFewFCLayers";
    case Errc::OracleUnavailable: return "OracleUnavailable";
    case Errc::NoCorrectlyDetectedMorphs: return "NoCorrectlyDetectedMorphs";
    case Errc::BelowGate: return "BelowGate";
    case Errc::EmptyList: return "EmptyList";
    case Errc::ZeroRegionRelevance: return "ZeroRegionRelevance";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ErrorCategory errc_category(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument:
    case Errc::BadRatios:
    case Errc::BadFraction:
    case Errc::NonPositiveSigma:
    case Errc::NonPositiveLength:
    case Errc::DegenerateRadii:
      return ErrorCategory::Config;
    case Errc::SolverDiverged:
    case Errc::FlowOverflow:
    case Errc::CoverageGap:
    case Errc::DegenerateSourceTriangle:
    case Errc::AllCollinear:
      return ErrorCategory::Numeric;
    default:
      return ErrorCategory::Data;
  }
}

}  // namespace morphkit
