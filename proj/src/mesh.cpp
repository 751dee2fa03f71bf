#include "wsvm/mesh.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <tuple>
#include <utility>

#include "wsvm/error.hpp"

namespace wsvm {

namespace {

// Even permutations of (0,1,2,3) that move local vertex k to the front.
constexpr std::array<std::array<int, 4>, 4> kEvenPermFront = {
    {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}}};

std::array<VertexId, 3> canonical_rotation(std::array<VertexId, 3> f) {
  const auto it = std::min_element(f.begin(), f.end());
  std::rotate(f.begin(), it, f.end());
  return f;
}

std::array<VertexId, 3> reversed(const std::array<VertexId, 3>& f) { return {f[0], f[2], f[1]}; }

// Parity of the permutation taking `from` to `to` (both hold the same ids).
bool is_odd_permutation(const Tet& from, const Tet& to) {
  std::array<int, 4> perm{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (from[j] == to[i]) perm[i] = j;
    }
  }
  int inversions = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (perm[i] > perm[j]) ++inversions;
    }
  }
  return (inversions & 1) != 0;
}

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t bits_of(double d) {
  std::uint64_t u = 0;
  static_assert(sizeof(u) == sizeof(d));
  std::memcpy(&u, &d, sizeof(d));
  return u;
}

}  // namespace

TetMesh::TetMesh(std::vector<Point3> vertices, std::vector<Tet> tets)
    : positions_(std::move(vertices)), tets_(std::move(tets)) {
  build_adjacency();
}

TetMesh build_adjacency(std::vector<Point3> vertices, std::vector<Tet> tets) {
  return TetMesh(std::move(vertices), std::move(tets));
}

void TetMesh::build_adjacency() {
  const auto nv = static_cast<VertexId>(positions_.size());
  Point3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max()};
  Point3 hi = -lo;
  for (const Point3& p : positions_) {
    if (!is_finite(p)) throw Error(ErrorCode::DegenerateImport, "non-finite vertex coordinate");
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  bbox_diagonal_ = positions_.empty() ? 0.0 : distance(lo, hi);
  const double zero_volume = 1e-14 * bbox_diagonal_ * bbox_diagonal_ * bbox_diagonal_;

  for (std::size_t t = 0; t < tets_.size(); ++t) {
    Tet& tet = tets_[t];
    for (int k = 0; k < 4; ++k) {
      if (tet[k] < 0 || tet[k] >= nv) {
        throw Error(ErrorCode::InvalidIndex, "tet " + std::to_string(t) + " references vertex " +
                                                 std::to_string(tet[k]));
      }
      for (int j = 0; j < k; ++j) {
        if (tet[j] == tet[k]) {
          throw Error(ErrorCode::DegenerateImport, "tet " + std::to_string(t) + " repeats a vertex");
        }
      }
    }
    const double vol = signed_volume(positions_[tet[0]], positions_[tet[1]], positions_[tet[2]],
                                     positions_[tet[3]]);
    if (std::abs(vol) <= zero_volume) {
      throw Error(ErrorCode::DegenerateImport, "tet " + std::to_string(t) + " has zero volume");
    }
    if (vol < 0.0) std::swap(tet[2], tet[3]);
  }

  struct FaceRef {
    FaceKey key;
    TetId tet;
    int local;
  };
  std::vector<FaceRef> faces;
  faces.reserve(tets_.size() * 4);
  for (std::size_t t = 0; t < tets_.size(); ++t) {
    for (int k = 0; k < 4; ++k) {
      const auto& f = kTetFaces[k];
      faces.push_back({FaceKey::make(tets_[t][f[0]], tets_[t][f[1]], tets_[t][f[2]]),
                       static_cast<TetId>(t), k});
    }
  }
  std::sort(faces.begin(), faces.end(), [](const FaceRef& a, const FaceRef& b) {
    return std::tie(a.key, a.tet, a.local) < std::tie(b.key, b.tet, b.local);
  });

  neighbors_.assign(tets_.size(), {kNoId, kNoId, kNoId, kNoId});
  boundary_faces_.clear();
  for (std::size_t i = 0; i < faces.size();) {
    std::size_t j = i + 1;
    while (j < faces.size() && faces[j].key == faces[i].key) ++j;
    const std::size_t mult = j - i;
    if (mult > 2) {
      const auto& v = faces[i].key.v;
      throw Error(ErrorCode::NonManifoldFace, "face (" + std::to_string(v[0]) + "," +
                                                  std::to_string(v[1]) + "," + std::to_string(v[2]) +
                                                  ") shared by " + std::to_string(mult) + " tets");
    }
    if (mult == 2) {
      neighbors_[faces[i].tet][faces[i].local] = faces[i + 1].tet;
      neighbors_[faces[i + 1].tet][faces[i + 1].local] = faces[i].tet;
    }
    i = j;
  }
  // boundary faces in tet order for reproducible output
  for (std::size_t t = 0; t < tets_.size(); ++t) {
    for (int k = 0; k < 4; ++k) {
      if (neighbors_[t][k] == kNoId) boundary_faces_.push_back(oriented_face(static_cast<TetId>(t), k));
    }
  }
  boundary_keys_.clear();
  boundary_edges_.clear();
  for (const auto& f : boundary_faces_) {
    boundary_keys_.push_back(FaceKey::make(f[0], f[1], f[2]));
    for (int e = 0; e < 3; ++e) boundary_edges_.push_back(EdgeKey::make(f[e], f[(e + 1) % 3]));
  }
  std::sort(boundary_keys_.begin(), boundary_keys_.end());
  std::sort(boundary_edges_.begin(), boundary_edges_.end());
  boundary_edges_.erase(std::unique(boundary_edges_.begin(), boundary_edges_.end()),
                        boundary_edges_.end());

  kinds_.assign(positions_.size(), VertexKind::Interior);
  for (const auto& f : boundary_faces_) {
    for (VertexId v : f) kinds_[v] = VertexKind::Boundary;
  }
  incident_.assign(positions_.size(), kNoId);
  for (std::size_t t = 0; t < tets_.size(); ++t) {
    for (VertexId v : tets_[t]) incident_[v] = static_cast<TetId>(t);
  }
  for (VertexId v = 0; v < nv; ++v) {
    if (incident_[v] == kNoId) {
      throw Error(ErrorCode::DanglingVertex, "vertex " + std::to_string(v) + " is in no tet");
    }
  }
  vertex_alive_.assign(positions_.size(), 1);
  free_tets_.clear();
  free_vertices_.clear();
  live_vertices_ = positions_.size();
  live_tets_ = tets_.size();
}

bool TetMesh::is_boundary_face(const FaceKey& f) const {
  return std::binary_search(boundary_keys_.begin(), boundary_keys_.end(), f);
}

bool TetMesh::is_boundary_edge(const EdgeKey& e) const {
  return std::binary_search(boundary_edges_.begin(), boundary_edges_.end(), e);
}

TetGeom TetMesh::geom(TetId t) const {
  const Tet& v = tets_[t];
  return {positions_[v[0]], positions_[v[1]], positions_[v[2]], positions_[v[3]]};
}

int TetMesh::local_index(TetId t, VertexId v) const {
  for (int k = 0; k < 4; ++k) {
    if (tets_[t][k] == v) return k;
  }
  return -1;
}

FaceKey TetMesh::face_key(TetId t, int k) const {
  const auto& f = kTetFaces[k];
  return FaceKey::make(tets_[t][f[0]], tets_[t][f[1]], tets_[t][f[2]]);
}

std::array<VertexId, 3> TetMesh::oriented_face(TetId t, int k) const {
  const auto& f = kTetFaces[k];
  return {tets_[t][f[0]], tets_[t][f[1]], tets_[t][f[2]]};
}

std::vector<TetId> TetMesh::alive_tets() const {
  std::vector<TetId> out;
  out.reserve(live_tets_);
  for (std::size_t t = 0; t < tets_.size(); ++t) {
    if (is_tet_alive(static_cast<TetId>(t))) out.push_back(static_cast<TetId>(t));
  }
  return out;
}

std::vector<VertexId> TetMesh::alive_vertices() const {
  std::vector<VertexId> out;
  out.reserve(live_vertices_);
  for (std::size_t v = 0; v < positions_.size(); ++v) {
    if (vertex_alive_[v]) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

std::vector<VertexId> TetMesh::interior_vertices() const {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < positions_.size(); ++v) {
    if (vertex_alive_[v] && kinds_[v] == VertexKind::Interior) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

std::vector<TetId> TetMesh::tets_of_vertex(VertexId v) const {
  std::vector<TetId> out;
  const TetId start = incident_[v];
  if (start == kNoId) return out;
  out.push_back(start);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const TetId t = out[i];
    for (int k = 0; k < 4; ++k) {
      if (tets_[t][k] == v) continue;  // the face opposite v does not contain it
      const TetId n = neighbors_[t][k];
      if (n != kNoId && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
  }
  return out;
}

VertexId TetMesh::add_vertex(const Point3& p, VertexKind kind) {
  VertexId v;
  if (!free_vertices_.empty()) {
    v = free_vertices_.back();
    free_vertices_.pop_back();
    positions_[v] = p;
    kinds_[v] = kind;
    vertex_alive_[v] = 1;
    incident_[v] = kNoId;
  } else {
    v = static_cast<VertexId>(positions_.size());
    positions_.push_back(p);
    kinds_.push_back(kind);
    vertex_alive_.push_back(1);
    incident_.push_back(kNoId);
  }
  ++live_vertices_;
  return v;
}

void TetMesh::remove_vertex(VertexId v) {
  vertex_alive_[v] = 0;
  incident_[v] = kNoId;
  free_vertices_.push_back(v);
  --live_vertices_;
}

std::vector<TetId> TetMesh::replace_tets(std::span<const TetId> removed, std::span<const Tet> added) {
  auto in_removed = [&](TetId t) { return std::find(removed.begin(), removed.end(), t) != removed.end(); };

  struct ExtFace {
    std::array<VertexId, 3> oriented;  // as seen from the removed tet
    FaceKey key;
    TetId outside;
    int outside_local;
    int matched = 0;
  };
  std::vector<ExtFace> ext;
  for (TetId r : removed) {
    if (r < 0 || static_cast<std::size_t>(r) >= tets_.size() || !is_tet_alive(r)) {
      throw Error(ErrorCode::TopologyMismatch, "removing dead tet " + std::to_string(r));
    }
    for (int k = 0; k < 4; ++k) {
      const TetId n = neighbors_[r][k];
      if (n != kNoId && in_removed(n)) continue;
      int nl = -1;
      if (n != kNoId) {
        for (int j = 0; j < 4; ++j) {
          if (neighbors_[n][j] == r) nl = j;
        }
      }
      ext.push_back({canonical_rotation(oriented_face(r, k)), face_key(r, k), n, nl});
    }
  }

  struct NewFace {
    std::array<VertexId, 3> oriented;
    FaceKey key;
    int ext = -1;       // matched external face
    int partner = -1;   // matched new face (index into new_faces)
  };
  std::vector<NewFace> new_faces;
  new_faces.reserve(added.size() * 4);
  for (const Tet& t : added) {
    for (int k = 0; k < 4; ++k) {
      const auto& f = kTetFaces[k];
      const std::array<VertexId, 3> o{t[f[0]], t[f[1]], t[f[2]]};
      new_faces.push_back({canonical_rotation(o), FaceKey::make(o[0], o[1], o[2])});
    }
  }
  auto mismatch = [](const std::string& why) { throw Error(ErrorCode::TopologyMismatch, why); };
  for (std::size_t i = 0; i < new_faces.size(); ++i) {
    NewFace& nf = new_faces[i];
    if (nf.ext >= 0 || nf.partner >= 0) continue;
    for (std::size_t e = 0; e < ext.size(); ++e) {
      if (ext[e].key == nf.key) {
        if (ext[e].matched) mismatch("external face matched twice");
        if (ext[e].oriented != nf.oriented) mismatch("external face orientation flipped");
        ext[e].matched = 1;
        nf.ext = static_cast<int>(e);
        break;
      }
    }
    if (nf.ext >= 0) continue;
    for (std::size_t j = i + 1; j < new_faces.size(); ++j) {
      if (new_faces[j].key == nf.key) {
        if (new_faces[j].partner >= 0 || new_faces[j].ext >= 0) mismatch("internal face shared by >2 tets");
        if (canonical_rotation(reversed(new_faces[j].oriented)) != nf.oriented) {
          mismatch("internal face orientation inconsistent");
        }
        nf.partner = static_cast<int>(j);
        new_faces[j].partner = static_cast<int>(i);
        break;
      }
    }
    if (nf.partner < 0) mismatch("new face matches nothing");
  }
  for (const ExtFace& e : ext) {
    if (!e.matched) mismatch("cavity boundary face left uncovered");
  }

  // commit
  std::vector<VertexId> touched;
  for (TetId r : removed) {
    for (VertexId v : tets_[r]) touched.push_back(v);
    tets_[r] = {kNoId, kNoId, kNoId, kNoId};
    neighbors_[r] = {kNoId, kNoId, kNoId, kNoId};
    free_tets_.push_back(r);
  }
  live_tets_ -= removed.size();
  std::vector<TetId> ids(added.size());
  for (std::size_t i = 0; i < added.size(); ++i) {
    if (!free_tets_.empty()) {
      ids[i] = free_tets_.back();
      free_tets_.pop_back();
    } else {
      ids[i] = static_cast<TetId>(tets_.size());
      tets_.push_back({});
      neighbors_.push_back({});
    }
    tets_[ids[i]] = added[i];
  }
  live_tets_ += added.size();
  for (std::size_t i = 0; i < new_faces.size(); ++i) {
    const TetId t = ids[i / 4];
    const int k = static_cast<int>(i % 4);
    const NewFace& nf = new_faces[i];
    if (nf.partner >= 0) {
      neighbors_[t][k] = ids[nf.partner / 4];
    } else {
      const ExtFace& e = ext[nf.ext];
      neighbors_[t][k] = e.outside;
      if (e.outside != kNoId) neighbors_[e.outside][e.outside_local] = t;
    }
  }
  for (std::size_t i = 0; i < added.size(); ++i) {
    for (VertexId v : added[i]) incident_[v] = ids[i];
  }
  for (VertexId v : touched) {
    const TetId t = incident_[v];
    if (t != kNoId && is_tet_alive(t) && local_index(t, v) >= 0) continue;
    incident_[v] = kNoId;
    for (const ExtFace& e : ext) {
      if (e.outside != kNoId && local_index(e.outside, v) >= 0) {
        incident_[v] = e.outside;
        break;
      }
    }
  }
  return ids;
}

OneRing one_ring(const TetMesh& mesh, VertexId v) {
  if (!mesh.is_interior(v)) {
    throw Error(ErrorCode::BoundaryVertex, "vertex " + std::to_string(v) + " is on the boundary");
  }
  OneRing ring;
  ring.center = v;
  for (TetId t : mesh.tets_of_vertex(v)) {
    const int k = mesh.local_index(t, v);
    const auto& perm = kEvenPermFront[k];
    const Tet& tet = mesh.tet(t);
    // (v, x, y, z) is positive, so cell_volume(v; y, x, z) = signed_volume(v, x, y, z) > 0
    ring.cells.push_back({t, {tet[perm[2]], tet[perm[1]], tet[perm[3]]}});
  }
  return ring;
}

EdgeStar edge_star(const TetMesh& mesh, const EdgeKey& e) {
  if (e.a < 0 || e.b < 0 || static_cast<std::size_t>(e.b) >= mesh.vertex_slots() || e.a == e.b ||
      !mesh.is_vertex_alive(e.a) || !mesh.is_vertex_alive(e.b)) {
    throw Error(ErrorCode::NoSuchEdge, "invalid edge");
  }
  TetId start = kNoId;
  for (TetId t : mesh.tets_of_vertex(e.a)) {
    if (mesh.local_index(t, e.b) >= 0) {
      start = t;
      break;
    }
  }
  if (start == kNoId) {
    throw Error(ErrorCode::NoSuchEdge, "edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ")");
  }
  auto others = [&](TetId t) {
    std::array<VertexId, 2> o{};
    int n = 0;
    for (VertexId v : mesh.tet(t)) {
      if (v != e.a && v != e.b) o[n++] = v;
    }
    return o;
  };
  auto crossing = [&](TetId t, VertexId opposite) { return mesh.neighbor(t, mesh.local_index(t, opposite)); };

  EdgeStar star;
  star.edge = e;
  auto [c, d] = others(start);
  if (is_odd_permutation(mesh.tet(start), {e.a, e.b, c, d})) std::swap(c, d);
  star.tets.push_back(start);
  star.ring = {c, d};
  // forward: ring[i] -> ring[i+1], next tet across the face opposite ring[i]
  TetId cur = start;
  VertexId back = c;
  VertexId front = d;
  for (;;) {
    const TetId next = crossing(cur, back);
    if (next == start) {
      star.closed = true;
      star.ring.pop_back();  // front wrapped around to ring[0]
      return star;
    }
    if (next == kNoId) break;
    const auto o = others(next);
    const VertexId w = o[0] == front ? o[1] : o[0];
    star.tets.push_back(next);
    star.ring.push_back(w);
    back = front;
    front = w;
    cur = next;
  }
  // open star: walk backwards from start
  cur = start;
  back = d;
  front = c;
  for (;;) {
    const TetId prev = crossing(cur, back);
    if (prev == kNoId) break;
    const auto o = others(prev);
    const VertexId w = o[0] == front ? o[1] : o[0];
    star.tets.insert(star.tets.begin(), prev);
    star.ring.insert(star.ring.begin(), w);
    back = front;
    front = w;
    cur = prev;
  }
  return star;
}

double enclosed_volume(const TetMesh& mesh) {
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.tet_slots(); ++t) {
    if (mesh.is_tet_alive(static_cast<TetId>(t))) sum += mesh.tet_volume(static_cast<TetId>(t));
  }
  return sum;
}

double boundary_volume(const TetMesh& mesh) {
  double sum = 0.0;
  for (const auto& f : mesh.boundary_faces()) {
    sum += dot(mesh.position(f[0]), cross(mesh.position(f[1]), mesh.position(f[2])));
  }
  return sum / 6.0;
}

ValidationResult validate(const TetMesh& mesh) {
  std::ostringstream why;
  auto fail = [&]() { return ValidationResult{false, why.str()}; };
  const auto nt = static_cast<TetId>(mesh.tet_slots());
  const auto nv = static_cast<VertexId>(mesh.vertex_slots());
  std::size_t open_faces = 0;
  std::vector<std::uint8_t> on_boundary(mesh.vertex_slots(), 0);
  for (TetId t = 0; t < nt; ++t) {
    if (!mesh.is_tet_alive(t)) continue;
    const Tet& tet = mesh.tet(t);
    for (int k = 0; k < 4; ++k) {
      if (tet[k] < 0 || tet[k] >= nv || !mesh.is_vertex_alive(tet[k])) {
        why << "tet " << t << " references dead vertex " << tet[k];
        return fail();
      }
    }
    const double vol = mesh.tet_volume(t);
    if (!(vol > 0.0)) {
      why << "tet " << t << " has non-positive volume " << vol;
      return fail();
    }
    for (int k = 0; k < 4; ++k) {
      const TetId n = mesh.neighbor(t, k);
      if (n == kNoId) {
        ++open_faces;
        if (!mesh.is_boundary_face(mesh.face_key(t, k))) {
          why << "tet " << t << " face " << k << " has no neighbor but is not a boundary face";
          return fail();
        }
        for (VertexId v : mesh.oriented_face(t, k)) on_boundary[v] = 1;
        continue;
      }
      if (n < 0 || n >= nt || !mesh.is_tet_alive(n)) {
        why << "tet " << t << " has dead neighbor " << n;
        return fail();
      }
      int back = -1;
      for (int j = 0; j < 4; ++j) {
        if (mesh.neighbor(n, j) == t) back = j;
      }
      if (back < 0 || mesh.face_key(n, back) != mesh.face_key(t, k)) {
        why << "adjacency between " << t << " and " << n << " is not symmetric";
        return fail();
      }
      const auto f = canonical_rotation(mesh.oriented_face(t, k));
      const auto g = canonical_rotation(reversed(mesh.oriented_face(n, back)));
      if (f != g) {
        why << "shared face of " << t << " and " << n << " has inconsistent orientation";
        return fail();
      }
    }
  }
  if (open_faces != mesh.boundary_faces().size()) {
    why << "boundary face count changed: " << open_faces << " open vs " << mesh.boundary_faces().size();
    return fail();
  }
  // closed 2-manifold boundary: each boundary edge in exactly two faces
  std::vector<EdgeKey> edges;
  for (const auto& f : mesh.boundary_faces()) {
    for (int e = 0; e < 3; ++e) edges.push_back(EdgeKey::make(f[e], f[(e + 1) % 3]));
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && edges[j] == edges[i]) ++j;
    if (j - i != 2) {
      why << "boundary edge (" << edges[i].a << "," << edges[i].b << ") in " << (j - i) << " faces";
      return fail();
    }
    i = j;
  }
  for (VertexId v = 0; v < nv; ++v) {
    if (!mesh.is_vertex_alive(v)) continue;
    const TetId t = mesh.incident_tet(v);
    if (t == kNoId || t >= nt || !mesh.is_tet_alive(t) || mesh.local_index(t, v) < 0) {
      why << "vertex " << v << " has invalid incident tet " << t;
      return fail();
    }
    if ((on_boundary[v] != 0) != (mesh.kind(v) == VertexKind::Boundary)) {
      why << "vertex " << v << " kind disagrees with boundary faces";
      return fail();
    }
  }
  return {};
}

void check_valid(const TetMesh& mesh) {
  const ValidationResult r = validate(mesh);
  if (!r.ok) throw Error(ErrorCode::ValidationFailure, r.message);
}

std::vector<EdgeKey> all_edges(const TetMesh& mesh) {
  std::vector<EdgeKey> edges;
  edges.reserve(mesh.num_tets() * 6);
  for (std::size_t t = 0; t < mesh.tet_slots(); ++t) {
    if (!mesh.is_tet_alive(static_cast<TetId>(t))) continue;
    const Tet& tet = mesh.tet(static_cast<TetId>(t));
    for (const auto& e : kTetEdges) edges.push_back(EdgeKey::make(tet[e[0]], tet[e[1]]));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::uint64_t content_hash(const TetMesh& mesh) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t v = 0; v < mesh.vertex_slots(); ++v) {
    if (!mesh.is_vertex_alive(static_cast<VertexId>(v))) continue;
    const Point3& p = mesh.position(static_cast<VertexId>(v));
    h = fnv_mix(h, v);
    h = fnv_mix(h, bits_of(p.x));
    h = fnv_mix(h, bits_of(p.y));
    h = fnv_mix(h, bits_of(p.z));
  }
  for (std::size_t t = 0; t < mesh.tet_slots(); ++t) {
    if (!mesh.is_tet_alive(static_cast<TetId>(t))) continue;
    h = fnv_mix(h, t);
    for (int k = 0; k < 4; ++k) {
      h = fnv_mix(h, static_cast<std::uint32_t>(mesh.tet(static_cast<TetId>(t))[k]));
      h = fnv_mix(h, static_cast<std::uint32_t>(mesh.neighbor(static_cast<TetId>(t), k)));
    }
  }
  return h;
}

TetMesh compacted(const TetMesh& mesh) {
  std::vector<VertexId> remap(mesh.vertex_slots(), kNoId);
  std::vector<Point3> positions;
  positions.reserve(mesh.num_vertices());
  for (VertexId v : mesh.alive_vertices()) {
    remap[v] = static_cast<VertexId>(positions.size());
    positions.push_back(mesh.position(v));
  }
  std::vector<Tet> tets;
  tets.reserve(mesh.num_tets());
  for (TetId t : mesh.alive_tets()) {
    Tet tet = mesh.tet(t);
    for (VertexId& v : tet) v = remap[v];
    tets.push_back(tet);
  }
  return TetMesh(std::move(positions), std::move(tets));
}

std::uint64_t topology_hash(const TetMesh& mesh) {
  using Key = std::array<std::array<std::uint64_t, 3>, 4>;
  std::vector<Key> keys;
  keys.reserve(mesh.num_tets());
  for (TetId t : mesh.alive_tets()) {
    Key k{};
    for (int i = 0; i < 4; ++i) {
      const Point3& p = mesh.position(mesh.tet(t)[i]);
      k[i] = {bits_of(p.x), bits_of(p.y), bits_of(p.z)};
    }
    std::sort(k.begin(), k.end());
    keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Key& k : keys) {
    for (const auto& p : k) {
      for (std::uint64_t c : p) h = fnv_mix(h, c);
    }
  }
  return h;
}

std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::Flip23: return "flip23";
    case OpKind::Flip32: return "flip32";
    case OpKind::EdgeRemoval: return "edge_removal";
    case OpKind::Split: return "split";
    case OpKind::Collapse: return "collapse";
    case OpKind::VertexSolve: return "vertex_solve";
  }
  return "unknown";
}

std::size_t OperationLog::count(OpKind kind, bool accepted) const {
  return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [&](const OpRecord& r) {
    return r.kind == kind && r.accepted == accepted;
  }));
}

}  // namespace wsvm
