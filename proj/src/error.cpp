#include "wsvm/error.hpp"

namespace wsvm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonManifoldFace: return "NonManifoldFace";
    case ErrorCode::DanglingVertex: return "DanglingVertex";
    case ErrorCode::BoundaryVertex: return "BoundaryVertex";
    case ErrorCode::NoSuchEdge: return "NoSuchEdge";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::DegenerateImport: return "DegenerateImport";
    case ErrorCode::TopologyMismatch: return "TopologyMismatch";
    case ErrorCode::ValidationFailure: return "ValidationFailure";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::DegenerateTet: return "DegenerateTet";
    case ErrorCode::InfeasibleStart: return "InfeasibleStart";
    case ErrorCode::EmptyMesh: return "EmptyMesh";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace wsvm
