#include "wsvm/remesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "wsvm/error.hpp"
#include "wsvm/geometry.hpp"

namespace wsvm {

namespace {

double volume_floor(const TetMesh& mesh) {
  const double d = mesh.bbox_diagonal();
  return 1e-14 * d * d * d;
}

TetGeom geom_of(const TetMesh& mesh, const Tet& t) {
  return {mesh.position(t[0]), mesh.position(t[1]), mesh.position(t[2]), mesh.position(t[3])};
}

double min_dihedral_existing(const TetMesh& mesh, const std::vector<TetId>& tets) {
  double m = std::numeric_limits<double>::infinity();
  for (TetId t : tets) m = std::min(m, min_dihedral_angle(mesh.geom(t)));
  return m;
}

// Minimum dihedral over candidate tets, or nullopt-like -1 if any is not
// positively oriented above the volume floor.
double min_dihedral_candidate(const TetMesh& mesh, const std::vector<Tet>& tets) {
  const double floor = volume_floor(mesh);
  double m = std::numeric_limits<double>::infinity();
  for (const Tet& t : tets) {
    const TetGeom g = geom_of(mesh, t);
    if (!(signed_volume(g) > floor)) return -1.0;
    m = std::min(m, min_dihedral_angle(g));
  }
  return m;
}

void log_flip(OperationLog* log, OpKind kind, std::vector<std::int32_t> ids, const FlipProposal& p) {
  if (!log) return;
  log->append({kind, std::move(ids), p.applied(), std::string(to_string(p.status)), p.min_dihedral_before,
               p.min_dihedral_after});
}

void log_sizing(OperationLog* log, OpKind kind, const EdgeKey& e, const SizingResult& r, double len) {
  if (!log) return;
  log->append({kind, {e.a, e.b}, r.applied(), std::string(to_string(r.status)), len, len});
}

// Applies the candidate if it strictly beats the current star.
void commit_if_better(TetMesh& mesh, FlipProposal& p, const std::vector<Tet>& candidate) {
  if (p.min_dihedral_after < 0.0) {
    p.status = OpStatus::GeometricallyInvalid;
    p.min_dihedral_after = 0.0;
    return;
  }
  if (!(p.min_dihedral_after > p.min_dihedral_before)) {
    p.status = OpStatus::QualityRejected;
    return;
  }
  p.cavity_after = mesh.replace_tets(p.cavity_before, candidate);
  p.status = OpStatus::Applied;
}

// Ring tets for a triangulation of a closed edge star, following the
// convention of EdgeStar (signed_volume(a, b, r_i, r_{i+1}) > 0).
std::vector<Tet> ring_tets(const EdgeKey& e, const std::vector<VertexId>& ring,
                           const std::vector<std::array<int, 3>>& triangles) {
  std::vector<Tet> out;
  out.reserve(triangles.size() * 2);
  for (const auto& tri : triangles) {
    const VertexId x = ring[tri[0]];
    const VertexId y = ring[tri[1]];
    const VertexId z = ring[tri[2]];
    out.push_back({x, y, z, e.b});
    out.push_back({x, z, y, e.a});
  }
  return out;
}

void triangulate_chain(int i, int j, std::vector<std::array<int, 3>>& current,
                       std::vector<std::vector<std::array<int, 3>>>& out,
                       std::vector<std::pair<int, int>>& pending) {
  // pending holds chains still to be triangulated
  if (j - i < 2) {
    if (pending.empty()) {
      out.push_back(current);
      return;
    }
    const auto next = pending.back();
    pending.pop_back();
    triangulate_chain(next.first, next.second, current, out, pending);
    pending.push_back(next);
    return;
  }
  for (int m = i + 1; m < j; ++m) {
    current.push_back({i, m, j});
    pending.emplace_back(m, j);
    triangulate_chain(i, m, current, out, pending);
    pending.pop_back();
    current.pop_back();
  }
}

bool contains(const std::vector<TetId>& v, TetId t) { return std::find(v.begin(), v.end(), t) != v.end(); }

}  // namespace

std::string_view to_string(OpStatus s) {
  switch (s) {
    case OpStatus::Applied: return "Applied";
    case OpStatus::BoundaryFace: return "BoundaryFace";
    case OpStatus::BoundaryEdge: return "BoundaryEdge";
    case OpStatus::GeometricallyInvalid: return "GeometricallyInvalid";
    case OpStatus::QualityRejected: return "QualityRejected";
    case OpStatus::WrongStarSize: return "WrongStarSize";
    case OpStatus::StarTooLarge: return "StarTooLarge";
    case OpStatus::WouldInvert: return "WouldInvert";
    case OpStatus::WouldExceedLength: return "WouldExceedLength";
    case OpStatus::BothBoundary: return "BothBoundary";
    case OpStatus::LinkViolation: return "LinkViolation";
    case OpStatus::RuleNotMet: return "RuleNotMet";
  }
  return "Unknown";
}

const std::vector<std::vector<std::array<int, 3>>>& ring_triangulations(int n) {
  static const auto table = [] {
    std::vector<std::vector<std::vector<std::array<int, 3>>>> t(kMaxEdgeRemovalStar + 1);
    for (int k = 3; k <= kMaxEdgeRemovalStar; ++k) {
      std::vector<std::array<int, 3>> current;
      std::vector<std::pair<int, int>> pending;
      triangulate_chain(0, k - 1, current, t[k], pending);
    }
    return t;
  }();
  if (n < 3 || n > kMaxEdgeRemovalStar) throw Error(ErrorCode::InvalidConfig, "ring size out of range");
  return table[n];
}

FlipProposal flip23(TetMesh& mesh, TetId tet, int k, OperationLog* log) {
  FlipProposal p;
  p.kind = FlipKind::Face23;
  p.face = mesh.oriented_face(tet, k);
  const TetId other = mesh.neighbor(tet, k);
  if (other == kNoId) {
    p.status = OpStatus::BoundaryFace;
    log_flip(log, OpKind::Flip23, {p.face[0], p.face[1], p.face[2]}, p);
    return p;
  }
  const VertexId a = mesh.tet(tet)[k];
  VertexId e = kNoId;
  for (VertexId v : mesh.tet(other)) {
    if (v != p.face[0] && v != p.face[1] && v != p.face[2]) e = v;
  }
  p.cavity_before = {tet, other};
  p.min_dihedral_before = min_dihedral_existing(mesh, p.cavity_before);
  const auto& f = p.face;
  // f is oriented outward from `tet`, i.e. toward e
  const std::vector<Tet> candidate = {{f[0], f[1], a, e}, {f[1], f[2], a, e}, {f[2], f[0], a, e}};
  p.min_dihedral_after = min_dihedral_candidate(mesh, candidate);
  commit_if_better(mesh, p, candidate);
  log_flip(log, OpKind::Flip23, {f[0], f[1], f[2]}, p);
  return p;
}

FlipProposal flip23(TetMesh& mesh, const FaceKey& face, OperationLog* log) {
  for (TetId t : mesh.tets_of_vertex(face.v[0])) {
    for (int k = 0; k < 4; ++k) {
      if (mesh.face_key(t, k) == face) return flip23(mesh, t, k, log);
    }
  }
  throw Error(ErrorCode::NoSuchEdge, "face not in mesh");
}

FlipProposal flip32(TetMesh& mesh, const EdgeKey& edge, OperationLog* log) {
  FlipProposal p;
  p.kind = FlipKind::Edge32;
  p.edge = edge;
  const EdgeStar star = edge_star(mesh, edge);
  p.cavity_before = star.tets;
  if (!star.closed) {
    p.status = OpStatus::BoundaryEdge;
  } else if (star.tets.size() != 3) {
    p.status = OpStatus::WrongStarSize;
  } else {
    p.min_dihedral_before = min_dihedral_existing(mesh, star.tets);
    const auto candidate = ring_tets(edge, star.ring, ring_triangulations(3).front());
    p.min_dihedral_after = min_dihedral_candidate(mesh, candidate);
    commit_if_better(mesh, p, candidate);
  }
  log_flip(log, OpKind::Flip32, {edge.a, edge.b}, p);
  return p;
}

FlipProposal remove_edge_nm(TetMesh& mesh, const EdgeKey& edge, OperationLog* log) {
  FlipProposal p;
  p.kind = FlipKind::EdgeRemovalNM;
  p.edge = edge;
  const EdgeStar star = edge_star(mesh, edge);
  p.cavity_before = star.tets;
  const int n = static_cast<int>(star.tets.size());
  if (!star.closed) {
    p.status = OpStatus::BoundaryEdge;
  } else if (n > kMaxEdgeRemovalStar) {
    p.status = OpStatus::StarTooLarge;
  } else if (n < 3) {
    p.status = OpStatus::WrongStarSize;
  } else {
    p.min_dihedral_before = min_dihedral_existing(mesh, star.tets);
    std::vector<Tet> best;
    double best_quality = -1.0;
    for (const auto& tri : ring_triangulations(n)) {
      auto candidate = ring_tets(edge, star.ring, tri);
      const double q = min_dihedral_candidate(mesh, candidate);
      if (q > best_quality) {
        best_quality = q;
        best = std::move(candidate);
      }
    }
    p.min_dihedral_after = best_quality;
    commit_if_better(mesh, p, best);
  }
  log_flip(log, n == 3 ? OpKind::Flip32 : OpKind::EdgeRemoval, {edge.a, edge.b}, p);
  return p;
}

SizingResult split_edge(TetMesh& mesh, const EdgeKey& edge, const SizingRule& rule, OperationLog* log) {
  SizingResult r;
  const double len = distance(mesh.position(edge.a), mesh.position(edge.b));
  auto done = [&]() {
    log_sizing(log, OpKind::Split, edge, r, len);
    return r;
  };
  const bool any_interior = mesh.is_interior(edge.a) || mesh.is_interior(edge.b);
  if (!any_interior || mesh.is_boundary_edge(edge)) {
    r.status = OpStatus::BoundaryEdge;
    return done();
  }
  if (!(len > rule.split_length())) {
    r.status = OpStatus::RuleNotMet;
    return done();
  }
  const EdgeStar star = edge_star(mesh, edge);
  if (!star.closed) {
    r.status = OpStatus::BoundaryEdge;
    return done();
  }
  const Point3 mid = 0.5 * (mesh.position(edge.a) + mesh.position(edge.b));
  const double floor = volume_floor(mesh);
  // new vertex id is not known yet; build with a placeholder and patch
  constexpr VertexId kMid = std::numeric_limits<VertexId>::max();
  std::vector<Tet> added;
  added.reserve(star.tets.size() * 2);
  for (TetId t : star.tets) {
    Tet lower = mesh.tet(t);
    Tet upper = mesh.tet(t);
    for (int k = 0; k < 4; ++k) {
      if (lower[k] == edge.b) lower[k] = kMid;
      if (upper[k] == edge.a) upper[k] = kMid;
    }
    for (const Tet& nt : {lower, upper}) {
      TetGeom g{};
      Point3* slots[4] = {&g.p0, &g.p1, &g.p2, &g.p3};
      for (int k = 0; k < 4; ++k) *slots[k] = nt[k] == kMid ? mid : mesh.position(nt[k]);
      if (!(signed_volume(g) > floor)) {
        r.status = OpStatus::WouldInvert;
        return done();
      }
    }
    added.push_back(lower);
    added.push_back(upper);
  }
  const VertexId m = mesh.add_vertex(mid, VertexKind::Interior);
  for (Tet& t : added) {
    for (VertexId& v : t) {
      if (v == kMid) v = m;
    }
  }
  mesh.replace_tets(star.tets, added);
  r.status = OpStatus::Applied;
  r.vertex = m;
  r.tets_removed = star.tets.size();
  r.tets_added = added.size();
  return done();
}

SizingResult collapse_edge(TetMesh& mesh, const EdgeKey& edge, const SizingRule& rule, OperationLog* log) {
  SizingResult r;
  const double len = distance(mesh.position(edge.a), mesh.position(edge.b));
  auto done = [&]() {
    log_sizing(log, OpKind::Collapse, edge, r, len);
    return r;
  };
  const bool a_in = mesh.is_interior(edge.a);
  const bool b_in = mesh.is_interior(edge.b);
  if (!a_in && !b_in) {
    r.status = OpStatus::BothBoundary;
    return done();
  }
  if (!(len < rule.collapse_length())) {
    r.status = OpStatus::RuleNotMet;
    return done();
  }
  // `gone` disappears, `keep` survives at `target`
  VertexId keep = edge.a;
  VertexId gone = edge.b;
  if (a_in && !b_in) std::swap(keep, gone);
  const Point3 target = (a_in && b_in) ? 0.5 * (mesh.position(edge.a) + mesh.position(edge.b)) : mesh.position(keep);

  const std::vector<TetId> gone_star = mesh.tets_of_vertex(gone);
  const std::vector<TetId> keep_star = mesh.tets_of_vertex(keep);
  if (!std::any_of(gone_star.begin(), gone_star.end(), [&](TetId t) { return mesh.local_index(t, keep) >= 0; })) {
    throw Error(ErrorCode::NoSuchEdge, "collapse of missing edge");
  }
  auto pos = [&](VertexId v) { return v == keep ? target : mesh.position(v); };
  const double floor = volume_floor(mesh);
  const double max_len = rule.split_length();

  std::vector<Tet> added;
  std::vector<TetId> removed = gone_star;
  auto check_tet = [&](const Tet& t) {
    const TetGeom g{pos(t[0]), pos(t[1]), pos(t[2]), pos(t[3])};
    if (!(signed_volume(g) > floor)) return OpStatus::WouldInvert;
    for (VertexId v : t) {
      if (v != keep && distance(target, pos(v)) > max_len) return OpStatus::WouldExceedLength;
    }
    return OpStatus::Applied;
  };
  for (TetId t : gone_star) {
    if (mesh.local_index(t, keep) >= 0) continue;  // edge star, deleted
    Tet nt = mesh.tet(t);
    nt[mesh.local_index(t, gone)] = keep;
    if (const OpStatus s = check_tet(nt); s != OpStatus::Applied) {
      r.status = s;
      return done();
    }
    added.push_back(nt);
  }
  if (a_in && b_in) {
    // keep moves to the midpoint: its remaining tets must stay valid too
    for (TetId t : keep_star) {
      if (contains(gone_star, t)) continue;
      if (const OpStatus s = check_tet(mesh.tet(t)); s != OpStatus::Applied) {
        r.status = s;
        return done();
      }
    }
  }
  try {
    mesh.replace_tets(removed, added);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::TopologyMismatch) throw;
    r.status = OpStatus::LinkViolation;
    return done();
  }
  mesh.set_position(keep, target);
  mesh.remove_vertex(gone);
  r.status = OpStatus::Applied;
  r.vertex = keep;
  r.tets_removed = removed.size();
  r.tets_added = added.size();
  return done();
}

PassSummary improvement_pass(TetMesh& mesh, double angle_focus, OperationLog* log) {
  PassSummary sum;
  std::vector<TetId> queue;
  for (TetId t : mesh.alive_tets()) {
    if (min_dihedral_angle(mesh.geom(t)) < angle_focus) queue.push_back(t);
  }
  std::vector<std::uint8_t> requeued(mesh.tet_slots(), 0);
  auto enqueue_new = [&](const std::vector<TetId>& created) {
    for (TetId t : created) {
      if (static_cast<std::size_t>(t) >= requeued.size()) requeued.resize(t + 1, 0);
      if (requeued[t]) continue;
      if (min_dihedral_angle(mesh.geom(t)) < angle_focus) {
        requeued[t] = 1;
        queue.push_back(t);
      }
    }
  };

  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const TetId t = queue[qi];
    if (!mesh.is_tet_alive(t) || !(min_dihedral_angle(mesh.geom(t)) < angle_focus)) continue;
    ++sum.visited;
    bool changed = false;
    for (int k = 0; k < 4 && !changed; ++k) {
      if (mesh.neighbor(t, k) == kNoId) continue;
      ++sum.flip23_attempted;
      const FlipProposal p = flip23(mesh, t, k, log);
      if (p.applied()) {
        ++sum.flip23_accepted;
        enqueue_new(p.cavity_after);
        changed = true;
      }
    }
    for (int e = 0; e < 6 && !changed; ++e) {
      const Tet tet = mesh.tet(t);
      const EdgeKey key = EdgeKey::make(tet[kTetEdges[e][0]], tet[kTetEdges[e][1]]);
      if (mesh.is_boundary_edge(key)) continue;
      ++sum.edge_removal_attempted;
      const FlipProposal p = remove_edge_nm(mesh, key, log);
      if (p.applied()) {
        ++sum.edge_removal_accepted;
        enqueue_new(p.cavity_after);
        changed = true;
      }
    }
  }
  return sum;
}

PassSummary sizing_pass(TetMesh& mesh, const SizingRule& rule, OperationLog* log) {
  PassSummary sum;
  auto edges_by_length = [&](bool longest_first) {
    std::vector<std::pair<double, EdgeKey>> out;
    for (const EdgeKey& e : all_edges(mesh)) {
      const double len = distance(mesh.position(e.a), mesh.position(e.b));
      if (longest_first ? len > rule.split_length() : len < rule.collapse_length()) out.emplace_back(len, e);
    }
    if (longest_first) {
      std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first > y.first : x.second < y.second;
      });
    } else {
      std::sort(out.begin(), out.end());
    }
    return out;
  };
  auto edge_exists = [&](const EdgeKey& e) {
    if (!mesh.is_vertex_alive(e.a) || !mesh.is_vertex_alive(e.b)) return false;
    for (TetId t : mesh.tets_of_vertex(e.a)) {
      if (mesh.local_index(t, e.b) >= 0) return true;
    }
    return false;
  };

  for (bool progress = true; progress;) {
    progress = false;
    for (const auto& [len, e] : edges_by_length(true)) {
      if (!edge_exists(e)) continue;
      const SizingResult r = split_edge(mesh, e, rule, log);
      if (r.applied()) {
        ++sum.splits;
        progress = true;
      } else if (r.status != OpStatus::RuleNotMet) {
        ++sum.split_rejected;
      }
    }
  }
  for (bool progress = true; progress;) {
    progress = false;
    for (const auto& [len, e] : edges_by_length(false)) {
      if (!edge_exists(e)) continue;
      const SizingResult r = collapse_edge(mesh, e, rule, log);
      if (r.applied()) {
        ++sum.collapses;
        progress = true;
      } else if (r.status != OpStatus::RuleNotMet) {
        ++sum.collapse_rejected;
      }
    }
  }
  return sum;
}

}  // namespace wsvm
