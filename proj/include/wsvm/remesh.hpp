#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "wsvm/mesh.hpp"

namespace wsvm {

/// Outcome of a local operation. Anything other than Applied leaves the mesh
/// untouched.
enum class OpStatus {
  Applied,
  BoundaryFace,
  BoundaryEdge,
  GeometricallyInvalid,
  QualityRejected,
  WrongStarSize,
  StarTooLarge,
  WouldInvert,
  WouldExceedLength,
  BothBoundary,
  LinkViolation,
  RuleNotMet,
};

std::string_view to_string(OpStatus s);

enum class FlipKind { Face23, Edge32, EdgeRemovalNM };

struct FlipProposal {
  FlipKind kind = FlipKind::Face23;
  OpStatus status = OpStatus::GeometricallyInvalid;
  std::array<VertexId, 3> face{kNoId, kNoId, kNoId};
  EdgeKey edge;
  std::vector<TetId> cavity_before;
  std::vector<TetId> cavity_after;  // ids of the new tets when applied
  double min_dihedral_before = 0.0;
  double min_dihedral_after = 0.0;

  bool applied() const { return status == OpStatus::Applied; }
};

/// Edge length thresholds: split above split_factor * t, collapse below
/// collapse_factor * t, and never create edges longer than split_factor * t
/// by collapsing.
struct SizingRule {
  double t = 1.0;
  double split_factor = 4.0 / 3.0;
  double collapse_factor = 4.0 / 5.0;

  double split_length() const { return split_factor * t; }
  double collapse_length() const { return collapse_factor * t; }
};

struct SizingResult {
  OpStatus status = OpStatus::RuleNotMet;
  VertexId vertex = kNoId;  // inserted (split) or surviving (collapse) vertex
  std::size_t tets_removed = 0;
  std::size_t tets_added = 0;

  bool applied() const { return status == OpStatus::Applied; }
};

/// Replaces the two tets sharing face `k` of `tet` with three tets around the
/// edge joining their apexes, if that strictly raises the minimum dihedral.
FlipProposal flip23(TetMesh& mesh, TetId tet, int k, OperationLog* log = nullptr);
FlipProposal flip23(TetMesh& mesh, const FaceKey& face, OperationLog* log = nullptr);

/// Replaces the three tets around an interior edge with two tets sharing the
/// face of the three ring vertices.
FlipProposal flip32(TetMesh& mesh, const EdgeKey& edge, OperationLog* log = nullptr);

/// Removes an interior edge with 3..7 incident tets by retriangulating its
/// ring: each triangulation of the n-vertex ring gives 2(n-2) tets (the same
/// result as a chain of 2-3 flips closed by a 3-2 flip). The best candidate by
/// minimum dihedral is applied if it strictly beats the current star.
FlipProposal remove_edge_nm(TetMesh& mesh, const EdgeKey& edge, OperationLog* log = nullptr);

inline constexpr int kMaxEdgeRemovalStar = 7;

/// All triangulations of a convex n-gon with vertices 0..n-1, each triangle
/// listed with ascending indices. Cached for 3 <= n <= 7.
const std::vector<std::vector<std::array<int, 3>>>& ring_triangulations(int n);

/// Inserts the midpoint of an interior edge longer than rule.split_length().
SizingResult split_edge(TetMesh& mesh, const EdgeKey& edge, const SizingRule& rule,
                        OperationLog* log = nullptr);

/// Merges the edge endpoints (into the boundary endpoint, or into the midpoint
/// when both are interior) if the edge is shorter than rule.collapse_length()
/// and the result keeps positive volumes and edge lengths within bounds.
SizingResult collapse_edge(TetMesh& mesh, const EdgeKey& edge, const SizingRule& rule,
                           OperationLog* log = nullptr);

struct PassSummary {
  std::size_t visited = 0;
  std::size_t flip23_attempted = 0;
  std::size_t flip23_accepted = 0;
  std::size_t edge_removal_attempted = 0;
  std::size_t edge_removal_accepted = 0;
  std::size_t splits = 0;
  std::size_t split_rejected = 0;
  std::size_t collapses = 0;
  std::size_t collapse_rejected = 0;

  std::size_t accepted() const { return flip23_accepted + edge_removal_accepted + splits + collapses; }
};

/// Visits tets with minimum dihedral below angle_focus in ascending id order
/// (new offenders are queued once) and tries face flips, then edge removals,
/// keeping only strict improvements.
PassSummary improvement_pass(TetMesh& mesh, double angle_focus = 40.0, OperationLog* log = nullptr);

/// Splits every splittable long edge until none remain, then collapses short
/// edges until a full sweep makes no progress.
PassSummary sizing_pass(TetMesh& mesh, const SizingRule& rule, OperationLog* log = nullptr);

}  // namespace wsvm
