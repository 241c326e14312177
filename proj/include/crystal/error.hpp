#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crystal {

enum class ErrorCode {
  NonConvex,
  OriginOutside,
  DegenerateEdge,
  NotSimple,
  NonAdmissibleDirection,
  AdjacencyViolation,
  ZeroLength,
  ParallelAdjacentFacets,
  StiffnessFailure,
  PastExtinction,
  EmptyFacet,
  BadRadii,
  UnlabeledSegment,
  ZeroArea,
  CandidateNotContained,
  LabelMismatch,
  InvalidArgument,
  EmptySet,
  Vanished,
  TouchedBoundary,
  NoConvergence,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code);

// All recoverable failures in the library are reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace crystal
