#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wsvm/geometry.hpp"
#include "wsvm/point3.hpp"

namespace wsvm {

using VertexId = std::int32_t;
using TetId = std::int32_t;
inline constexpr std::int32_t kNoId = -1;

using Tet = std::array<VertexId, 4>;

enum class VertexKind : std::uint8_t { Interior, Boundary };

/// Faces of a tet by opposite local vertex, oriented with outward normals for a
/// positively oriented tet.
inline constexpr std::array<std::array<int, 3>, 4> kTetFaces = {
    {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}}};

/// Unordered vertex pair in canonical (a < b) form.
struct EdgeKey {
  VertexId a = kNoId;
  VertexId b = kNoId;

  static EdgeKey make(VertexId u, VertexId v) { return u < v ? EdgeKey{u, v} : EdgeKey{v, u}; }
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

/// Sorted vertex triple identifying a face regardless of orientation.
struct FaceKey {
  std::array<VertexId, 3> v{kNoId, kNoId, kNoId};

  static FaceKey make(VertexId a, VertexId b, VertexId c) {
    FaceKey k{{a, b, c}};
    std::sort(k.v.begin(), k.v.end());
    return k;
  }
  friend auto operator<=>(const FaceKey&, const FaceKey&) = default;
};

struct OneRingCell {
  TetId tet = kNoId;
  /// (v_mj, v_mk, v_ml), ordered so cell_volume(center, triple) > 0.
  std::array<VertexId, 3> triple{};
};

/// Cavity of an interior vertex: every incident tet with its opposite face.
struct OneRing {
  VertexId center = kNoId;
  std::vector<OneRingCell> cells;
};

/// Tets around an edge in rotational order. For a closed star with n tets,
/// ring has n entries and tets[i] spans (a, b, ring[i], ring[(i+1) % n]) with
/// signed_volume(a, b, ring[i], ring[i+1]) > 0. An open star has n + 1 ring
/// entries and no wrap-around.
struct EdgeStar {
  EdgeKey edge;
  std::vector<TetId> tets;
  std::vector<VertexId> ring;
  bool closed = false;
};

/// Indexed tetrahedral mesh with tet-to-tet adjacency.
///
/// Deleted tets and vertices are tombstoned; their slots may be reused by later
/// insertions but live indices never move. The boundary face set is fixed at
/// construction and every mutation must preserve it.
class TetMesh {
 public:
  TetMesh() = default;

  /// Builds adjacency from raw arrays. Negatively oriented tets are repaired by
  /// swapping two vertices; (near-)zero volume tets are rejected.
  TetMesh(std::vector<Point3> vertices, std::vector<Tet> tets);

  std::size_t vertex_slots() const { return positions_.size(); }
  std::size_t tet_slots() const { return tets_.size(); }
  std::size_t num_vertices() const { return live_vertices_; }
  std::size_t num_tets() const { return live_tets_; }

  bool is_tet_alive(TetId t) const { return tets_[t][0] != kNoId; }
  bool is_vertex_alive(VertexId v) const { return vertex_alive_[v] != 0; }

  const Tet& tet(TetId t) const { return tets_[t]; }
  TetId neighbor(TetId t, int k) const { return neighbors_[t][k]; }
  const std::array<TetId, 4>& neighbors(TetId t) const { return neighbors_[t]; }

  const Point3& position(VertexId v) const { return positions_[v]; }
  void set_position(VertexId v, const Point3& p) { positions_[v] = p; }
  std::span<const Point3> positions() const { return positions_; }

  VertexKind kind(VertexId v) const { return kinds_[v]; }
  bool is_interior(VertexId v) const { return kinds_[v] == VertexKind::Interior; }
  TetId incident_tet(VertexId v) const { return incident_[v]; }

  /// Boundary faces, oriented outward, in construction order.
  const std::vector<std::array<VertexId, 3>>& boundary_faces() const { return boundary_faces_; }
  bool is_boundary_face(const FaceKey& f) const;
  bool is_boundary_edge(const EdgeKey& e) const;

  TetGeom geom(TetId t) const;
  double tet_volume(TetId t) const { return signed_volume(geom(t)); }
  int local_index(TetId t, VertexId v) const;
  FaceKey face_key(TetId t, int k) const;
  std::array<VertexId, 3> oriented_face(TetId t, int k) const;

  /// Bounding box diagonal of the constructed vertex set.
  double bbox_diagonal() const { return bbox_diagonal_; }

  std::vector<TetId> alive_tets() const;
  std::vector<VertexId> alive_vertices() const;
  std::vector<VertexId> interior_vertices() const;

  /// Tets containing v, found by walking faces around v.
  std::vector<TetId> tets_of_vertex(VertexId v) const;

  VertexId add_vertex(const Point3& p, VertexKind kind);
  /// Tombstones v. No live tet may reference it.
  void remove_vertex(VertexId v);

  /// Atomically replaces the `removed` tets by `added`, rewiring adjacency
  /// locally. The new tets must exactly fill the cavity: every face of the
  /// cavity boundary is matched once with consistent orientation and every
  /// internal face is shared by two new tets. Throws TopologyMismatch
  /// otherwise, leaving the mesh untouched. Returns the ids of the new tets.
  std::vector<TetId> replace_tets(std::span<const TetId> removed, std::span<const Tet> added);

 private:
  void build_adjacency();

  std::vector<Point3> positions_;
  std::vector<VertexKind> kinds_;
  std::vector<std::uint8_t> vertex_alive_;
  std::vector<TetId> incident_;
  std::vector<Tet> tets_;
  std::vector<std::array<TetId, 4>> neighbors_;
  std::vector<TetId> free_tets_;
  std::vector<VertexId> free_vertices_;
  std::vector<std::array<VertexId, 3>> boundary_faces_;
  std::vector<FaceKey> boundary_keys_;  // sorted
  std::vector<EdgeKey> boundary_edges_;  // sorted
  std::size_t live_vertices_ = 0;
  std::size_t live_tets_ = 0;
  double bbox_diagonal_ = 0.0;
};

/// Constructs a mesh, populating adjacency, boundary faces and vertex kinds.
TetMesh build_adjacency(std::vector<Point3> vertices, std::vector<Tet> tets);

/// Throws BoundaryVertex if v is not interior.
OneRing one_ring(const TetMesh& mesh, VertexId v);

/// Throws NoSuchEdge if the edge is not in the mesh.
EdgeStar edge_star(const TetMesh& mesh, const EdgeKey& e);

/// Sum of signed tet volumes.
double enclosed_volume(const TetMesh& mesh);

/// Divergence-theorem volume of the outward boundary faces.
double boundary_volume(const TetMesh& mesh);

struct ValidationResult {
  bool ok = true;
  std::string message;
};

/// Full structural and geometric check: positive volumes, symmetric adjacency
/// with opposite face orientation, boundary set unchanged and closed, vertex
/// kinds and incidence consistent.
ValidationResult validate(const TetMesh& mesh);

/// Throws ValidationFailure with the first problem found.
void check_valid(const TetMesh& mesh);

/// Edges of all live tets, sorted and unique.
std::vector<EdgeKey> all_edges(const TetMesh& mesh);

/// Hash of positions and connectivity of live elements, by slot.
std::uint64_t content_hash(const TetMesh& mesh);

/// Renumbers live vertices and tets densely, preserving relative order.
TetMesh compacted(const TetMesh& mesh);

/// Hash of the element set as sorted vertex-position tuples, independent of
/// index numbering.
std::uint64_t topology_hash(const TetMesh& mesh);

enum class OpKind { Flip23, Flip32, EdgeRemoval, Split, Collapse, VertexSolve };

std::string_view to_string(OpKind kind);

struct OpRecord {
  OpKind kind{};
  std::vector<std::int32_t> ids;
  bool accepted = false;
  std::string reason;
  double metric_before = 0.0;
  double metric_after = 0.0;
};

/// Append-only record of attempted operations.
class OperationLog {
 public:
  void append(OpRecord record) { records_.push_back(std::move(record)); }
  const std::vector<OpRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  std::size_t count(OpKind kind, bool accepted) const;

 private:
  std::vector<OpRecord> records_;
};

}  // namespace wsvm

template <>
struct std::hash<wsvm::EdgeKey> {
  std::size_t operator()(const wsvm::EdgeKey& e) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.a)) << 32) |
                                      static_cast<std::uint32_t>(e.b));
  }
};
