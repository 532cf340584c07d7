#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace matsumoto {

enum class ErrorCode {
  ZeroRay,
  DimError,
  DegenerateProjection,
  BoundaryVertex,
  OutOfWindow,
  AxiomViolation,
  MalformedGraph,
  BadCoxeterMatrix,
  BadCartanMatrix,
  KeyCollision,
  OddPolygon,
  ParseError,
  BadPath,
  BadRank2,
  InvalidMove,
  NotShortestPair,
  CapExceeded,
  NotClosed,
  BadFan,
  BackendMismatch,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroRay: return "ZeroRay";
    case ErrorCode::DimError: return "DimError";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::BoundaryVertex: return "BoundaryVertex";
    case ErrorCode::OutOfWindow: return "OutOfWindow";
    case ErrorCode::AxiomViolation: return "AxiomViolation";
    case ErrorCode::MalformedGraph: return "MalformedGraph";
    case ErrorCode::BadCoxeterMatrix: return "BadCoxeterMatrix";
    case ErrorCode::BadCartanMatrix: return "BadCartanMatrix";
    case ErrorCode::KeyCollision: return "KeyCollision";
    case ErrorCode::OddPolygon: return "OddPolygon";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BadPath: return "BadPath";
    case ErrorCode::BadRank2: return "BadRank2";
    case ErrorCode::InvalidMove: return "InvalidMove";
    case ErrorCode::NotShortestPair: return "NotShortestPair";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::BadFan: return "BadFan";
    case ErrorCode::BackendMismatch: return "BackendMismatch";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message holds the diagnostic detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace matsumoto
