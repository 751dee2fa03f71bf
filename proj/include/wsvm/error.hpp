#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wsvm {

enum class ErrorCode {
  // mesh_core
  NonManifoldFace,
  DanglingVertex,
  BoundaryVertex,
  NoSuchEdge,
  InvalidIndex,
  DegenerateImport,
  TopologyMismatch,
  ValidationFailure,
  // geometry
  DegenerateFace,
  DegenerateTet,
  // vertex solver
  InfeasibleStart,
  // quality
  EmptyMesh,
  // seedgen
  ResolutionTooCoarse,
  DegenerateInput,
  DuplicatePoints,
  InvalidDomain,
  // io / config
  ParseError,
  UnsupportedFormat,
  IoError,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wsvm
