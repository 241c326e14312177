#include "crystal/error.hpp"

namespace crystal {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvex: return "NonConvex";
    case ErrorCode::OriginOutside: return "OriginOutside";
    case ErrorCode::DegenerateEdge: return "DegenerateEdge";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::NonAdmissibleDirection: return "NonAdmissibleDirection";
    case ErrorCode::AdjacencyViolation: return "AdjacencyViolation";
    case ErrorCode::ZeroLength: return "ZeroLength";
    case ErrorCode::ParallelAdjacentFacets: return "ParallelAdjacentFacets";
    case ErrorCode::StiffnessFailure: return "StiffnessFailure";
    case ErrorCode::PastExtinction: return "PastExtinction";
    case ErrorCode::EmptyFacet: return "EmptyFacet";
    case ErrorCode::BadRadii: return "BadRadii";
    case ErrorCode::UnlabeledSegment: return "UnlabeledSegment";
    case ErrorCode::ZeroArea: return "ZeroArea";
    case ErrorCode::CandidateNotContained: return "CandidateNotContained";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::Vanished: return "Vanished";
    case ErrorCode::TouchedBoundary: return "TouchedBoundary";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace crystal
