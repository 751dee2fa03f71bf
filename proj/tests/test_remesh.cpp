#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "support/fixtures.hpp"
#include "wsvm/error.hpp"
#include "wsvm/remesh.hpp"
#include "wsvm/seedgen.hpp"

using namespace wsvm;
using namespace wsvm::testing;

namespace {

// Two tets sharing the unit equilateral triangle in z = 0, apexes at +-h.
// Vertices: 0..2 triangle, 3 top apex, 4 bottom apex.
TetMesh bipyramid(double h, const Point3& top_shift = {}) {
  const double s = std::sqrt(3.0) / 2.0;
  return TetMesh({{1, 0, 0}, {-0.5, s, 0}, {-0.5, -s, 0}, Point3{0, 0, h} + top_shift, Point3{0, 0, -h} + top_shift},
                 {{0, 1, 2, 3}, {0, 2, 1, 4}});
}

double mesh_min_dihedral(const TetMesh& m) {
  double out = std::numeric_limits<double>::infinity();
  for (TetId t : m.alive_tets()) out = std::min(out, min_dihedral_angle(m.geom(t)));
  return out;
}

double min_dihedral_of(const TetMesh& m, const std::vector<Tet>& tets) {
  double out = std::numeric_limits<double>::infinity();
  for (const Tet& t : tets) {
    const TetGeom g{m.position(t[0]), m.position(t[1]), m.position(t[2]), m.position(t[3])};
    if (signed_volume(g) <= 0.0) return -1.0;
    out = std::min(out, min_dihedral_angle(g));
  }
  return out;
}

// Five tets around the near-vertical edge (5, 6) with a perturbed pentagon ring.
TetMesh pentagon_star() {
  std::vector<Point3> v;
  const double radii[5] = {1.0, 0.8, 1.2, 0.9, 1.1};
  for (int i = 0; i < 5; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 5.0 + 0.05 * i;
    v.push_back({radii[i] * std::cos(a), radii[i] * std::sin(a), 0.05 * (i % 2)});
  }
  v.push_back({0.05, 0, -0.7});
  v.push_back({-0.05, 0.02, 0.6});
  std::vector<Tet> tets;
  for (VertexId i = 0; i < 5; ++i) tets.push_back({5, 6, i, static_cast<VertexId>((i + 1) % 5)});
  return TetMesh(std::move(v), std::move(tets));
}

std::set<Tet> element_set(const TetMesh& m) {
  std::set<Tet> out;
  for (TetId t : m.alive_tets()) {
    Tet q = m.tet(t);
    std::sort(q.begin(), q.end());
    out.insert(q);
  }
  return out;
}

std::size_t catalan(int n) {
  std::size_t c = 1;
  for (int k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

}  // namespace

TEST(RingTriangulations, CatalanCountsAndValidTriangles) {
  for (int n = 3; n <= kMaxEdgeRemovalStar; ++n) {
    const auto& all = ring_triangulations(n);
    EXPECT_EQ(all.size(), catalan(n - 2)) << n;
    for (const auto& tri : all) {
      ASSERT_EQ(tri.size(), static_cast<std::size_t>(n - 2));
      for (const auto& t : tri) {
        EXPECT_LT(t[0], t[1]);
        EXPECT_LT(t[1], t[2]);
        EXPECT_LT(t[2], n);
      }
    }
  }
  EXPECT_THROW(ring_triangulations(2), Error);
  EXPECT_THROW(ring_triangulations(8), Error);
}

TEST(Flip23, FlatBipyramidIsImproved) {
  TetMesh m = bipyramid(0.2);
  const double before = mesh_min_dihedral(m);
  const FlipProposal p = flip23(m, FaceKey::make(0, 1, 2));
  ASSERT_TRUE(p.applied()) << to_string(p.status);
  EXPECT_EQ(m.num_tets(), 3u);
  EXPECT_EQ(p.cavity_after.size(), 3u);
  EXPECT_NEAR(enclosed_volume(m), 2.0 * (std::sqrt(3.0) * 3.0 / 4.0) * 0.2 / 3.0, 1e-14);
  EXPECT_TRUE(validate(m).ok);
  EXPECT_NEAR(p.min_dihedral_before, before, 1e-12);
  EXPECT_GT(mesh_min_dihedral(m), before);
  EXPECT_DOUBLE_EQ(p.min_dihedral_after, mesh_min_dihedral(m));
}

TEST(Flip23, TallBipyramidIsRejectedUntouched) {
  TetMesh m = bipyramid(1.0);
  const auto h = content_hash(m);
  const FlipProposal p = flip23(m, FaceKey::make(0, 1, 2));
  EXPECT_EQ(p.status, OpStatus::QualityRejected);
  EXPECT_LT(p.min_dihedral_after, p.min_dihedral_before);
  EXPECT_EQ(content_hash(m), h);
}

TEST(Flip23, NonConvexPairIsGeometricallyInvalid) {
  TetMesh m = bipyramid(0.3, {2.0, 0, 0});
  const auto h = content_hash(m);
  const FlipProposal p = flip23(m, FaceKey::make(0, 1, 2));
  EXPECT_EQ(p.status, OpStatus::GeometricallyInvalid);
  EXPECT_EQ(content_hash(m), h);
}

TEST(Flip23, BoundaryFaceIsRefused) {
  TetMesh m = bipyramid(0.2);
  OperationLog log;
  const FlipProposal p = flip23(m, FaceKey::make(0, 1, 3), &log);
  EXPECT_EQ(p.status, OpStatus::BoundaryFace);
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log.count(OpKind::Flip23, false), 1u);
}

TEST(Flip32, RoundTripRestoresTopology) {
  TetMesh m = bipyramid(0.2);
  const auto original = element_set(m);
  ASSERT_TRUE(flip23(m, FaceKey::make(0, 1, 2)).applied());
  EXPECT_NE(element_set(m), original);
  // stretch the apexes so two tets are better again
  m.set_position(3, {0, 0, 1.0});
  m.set_position(4, {0, 0, -1.0});
  const FlipProposal back = flip32(m, EdgeKey::make(3, 4));
  ASSERT_TRUE(back.applied()) << to_string(back.status);
  EXPECT_EQ(m.num_tets(), 2u);
  EXPECT_EQ(element_set(m), original);
  EXPECT_TRUE(validate(m).ok);
}

TEST(Flip32, WrongStarSizeAndBoundaryEdge) {
  TetMesh oct = octahedron_mesh();
  EXPECT_EQ(flip32(oct, EdgeKey::make(0, 1)).status, OpStatus::WrongStarSize);
  EXPECT_EQ(flip32(oct, EdgeKey::make(1, 3)).status, OpStatus::BoundaryEdge);
}

TEST(EdgeRemoval, ThreeStarMatchesFlip32) {
  TetMesh three = bipyramid(0.2);
  ASSERT_TRUE(flip23(three, FaceKey::make(0, 1, 2)).applied());
  three.set_position(3, {0, 0, 1.0});
  three.set_position(4, {0, 0, -1.0});
  TetMesh b = three;
  const FlipProposal p = flip32(three, EdgeKey::make(3, 4));
  const FlipProposal q = remove_edge_nm(b, EdgeKey::make(3, 4));
  ASSERT_TRUE(p.applied());
  ASSERT_TRUE(q.applied());
  EXPECT_EQ(topology_hash(compacted(three)), topology_hash(compacted(b)));
  EXPECT_EQ(p.min_dihedral_after, q.min_dihedral_after);
}

TEST(EdgeRemoval, OctahedronAxisIsInvalidAndUntouched) {
  TetMesh m = octahedron_mesh();
  const auto h = content_hash(m);
  const FlipProposal p = remove_edge_nm(m, EdgeKey::make(0, 1));
  // every ring triangulation has a triangle through the center vertex
  EXPECT_EQ(p.status, OpStatus::GeometricallyInvalid);
  EXPECT_EQ(content_hash(m), h);
}

TEST(EdgeRemoval, FiveStarPicksBestTriangulation) {
  TetMesh m = pentagon_star();
  const EdgeKey e = EdgeKey::make(5, 6);
  const EdgeStar star = edge_star(m, e);
  ASSERT_TRUE(star.closed);
  ASSERT_EQ(star.tets.size(), 5u);
  double best = -1.0;
  for (const auto& tri : ring_triangulations(5)) {
    std::vector<Tet> cand;
    for (const auto& t : tri) {
      cand.push_back({star.ring[t[0]], star.ring[t[1]], star.ring[t[2]], e.b});
      cand.push_back({star.ring[t[0]], star.ring[t[2]], star.ring[t[1]], e.a});
    }
    best = std::max(best, min_dihedral_of(m, cand));
  }
  const double before = mesh_min_dihedral(m);
  const double volume = enclosed_volume(m);
  const FlipProposal p = remove_edge_nm(m, e);
  EXPECT_DOUBLE_EQ(p.min_dihedral_after, best);
  if (best > before) {
    ASSERT_TRUE(p.applied());
    EXPECT_EQ(m.num_tets(), 6u);
    EXPECT_NEAR(enclosed_volume(m), volume, 1e-14);
    EXPECT_TRUE(validate(m).ok);
  } else {
    EXPECT_FALSE(p.applied());
  }
}

TEST(EdgeRemoval, BoundaryEdgeRefused) {
  TetMesh m = pentagon_star();
  EXPECT_EQ(remove_edge_nm(m, EdgeKey::make(0, 1)).status, OpStatus::BoundaryEdge);
}

TEST(SplitEdge, OctahedronAxis) {
  TetMesh m = octahedron_mesh();
  const SizingResult r = split_edge(m, EdgeKey::make(0, 1), {0.5});
  ASSERT_TRUE(r.applied()) << to_string(r.status);
  EXPECT_EQ(r.tets_removed, 4u);
  EXPECT_EQ(r.tets_added, 8u);
  EXPECT_EQ(m.num_tets(), 12u);
  EXPECT_EQ(m.position(r.vertex), (Point3{0.5, 0, 0}));
  EXPECT_TRUE(m.is_interior(r.vertex));
  EXPECT_NEAR(enclosed_volume(m), 4.0 / 3.0, 1e-14);
  EXPECT_TRUE(validate(m).ok);
}

TEST(SplitEdge, RefusalsLeaveMeshUntouched) {
  TetMesh m = octahedron_mesh();
  const auto h = content_hash(m);
  EXPECT_EQ(split_edge(m, EdgeKey::make(0, 1), {1.0}).status, OpStatus::RuleNotMet);
  EXPECT_EQ(split_edge(m, EdgeKey::make(1, 3), {0.1}).status, OpStatus::BoundaryEdge);
  EXPECT_EQ(content_hash(m), h);
}

TEST(CollapseEdge, CenterIntoBoundaryVertex) {
  TetMesh m = octahedron_mesh();
  const SizingResult r = collapse_edge(m, EdgeKey::make(0, 1), {2.0});
  ASSERT_TRUE(r.applied()) << to_string(r.status);
  EXPECT_EQ(r.vertex, 1);
  EXPECT_FALSE(m.is_vertex_alive(0));
  EXPECT_EQ(m.num_tets(), 4u);
  EXPECT_EQ(m.num_vertices(), 6u);
  EXPECT_NEAR(enclosed_volume(m), 4.0 / 3.0, 1e-14);
  EXPECT_TRUE(validate(m).ok);
}

TEST(CollapseEdge, RefusalsLeaveMeshUntouched) {
  TetMesh m = octahedron_mesh();
  const auto h = content_hash(m);
  EXPECT_EQ(collapse_edge(m, EdgeKey::make(0, 1), {1.0}).status, OpStatus::RuleNotMet);
  EXPECT_EQ(collapse_edge(m, EdgeKey::make(1, 3), {10.0}).status, OpStatus::BothBoundary);
  // merging into vertex 1 would stretch 1-2 beyond the split length
  EXPECT_EQ(collapse_edge(m, EdgeKey::make(0, 1), {1.3}).status, OpStatus::WouldExceedLength);
  EXPECT_EQ(content_hash(m), h);
}

TEST(CollapseEdge, InteriorPairMergesAtMidpoint) {
  TetMesh m = cube_seed({DomainShape::Cube, 1.0, 0.25});
  // split an interior edge, then collapse the two halves back
  EdgeKey target{};
  for (const EdgeKey& e : all_edges(m)) {
    if (m.is_interior(e.a) && m.is_interior(e.b)) {
      target = e;
      break;
    }
  }
  ASSERT_NE(target.a, kNoId);
  const double volume = enclosed_volume(m);
  const std::size_t tets = m.num_tets();
  const SizingResult s = split_edge(m, target, {0.01});
  ASSERT_TRUE(s.applied());
  const SizingResult c = collapse_edge(m, EdgeKey::make(target.a, s.vertex), {10.0});
  ASSERT_TRUE(c.applied()) << to_string(c.status);
  EXPECT_EQ(m.num_tets(), tets);
  EXPECT_NEAR(enclosed_volume(m), volume, 1e-12);
  EXPECT_TRUE(validate(m).ok);
}

TEST(ImprovementPass, NoOpWhenAllAnglesAboveFocus) {
  TetMesh m = octahedron_mesh();
  const auto h = content_hash(m);
  const PassSummary s = improvement_pass(m);
  EXPECT_EQ(s.visited, 0u);
  EXPECT_EQ(content_hash(m), h);
}

TEST(ImprovementPass, NeverLowersMinimumDihedralAndKeepsBoundary) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    TetMesh m = jittered_cube(seed, 1.0, 0.2, 0.4);
    const double before = mesh_min_dihedral(m);
    const double volume = enclosed_volume(m);
    const auto boundary = m.boundary_faces();
    OperationLog log;
    const PassSummary s = improvement_pass(m, 40.0, &log);
    EXPECT_GE(mesh_min_dihedral(m), before);
    EXPECT_NEAR(enclosed_volume(m), volume, 1e-12);
    EXPECT_EQ(m.boundary_faces(), boundary);
    EXPECT_TRUE(validate(m).ok);
    EXPECT_GT(s.visited, 0u);
    EXPECT_EQ(log.count(OpKind::Flip23, true) + log.count(OpKind::EdgeRemoval, true) +
                  log.count(OpKind::Flip32, true),
              s.accepted());
    for (const auto& rec : log.records()) {
      if (rec.accepted) EXPECT_GT(rec.metric_after, rec.metric_before);
    }
  }
}

TEST(SizingPass, EveryOutOfRangeEdgeHasLoggedRejection) {
  TetMesh m = jittered_cube(7, 1.0, 0.25, 0.3);
  const SizingRule rule{0.15};
  const double volume = enclosed_volume(m);
  const auto boundary = m.boundary_faces();
  OperationLog log;
  const PassSummary s = sizing_pass(m, rule, &log);
  EXPECT_GT(s.splits, 0u);
  EXPECT_GT(s.collapses, 0u);
  EXPECT_NEAR(enclosed_volume(m), volume, 1e-12);
  EXPECT_EQ(m.boundary_faces(), boundary);
  EXPECT_TRUE(validate(m).ok);
  std::set<std::pair<VertexId, VertexId>> split_rejected, collapse_rejected;
  for (const OpRecord& r : log.records()) {
    if (r.accepted || r.reason == to_string(OpStatus::RuleNotMet)) continue;
    if (r.kind == OpKind::Split) split_rejected.insert({r.ids[0], r.ids[1]});
    if (r.kind == OpKind::Collapse) collapse_rejected.insert({r.ids[0], r.ids[1]});
  }
  for (const EdgeKey& e : all_edges(m)) {
    const double len = distance(m.position(e.a), m.position(e.b));
    if (len > rule.split_length() && !m.is_boundary_edge(e)) EXPECT_TRUE(split_rejected.count({e.a, e.b}));
    if (len < rule.collapse_length() && (m.is_interior(e.a) || m.is_interior(e.b))) {
      EXPECT_TRUE(collapse_rejected.count({e.a, e.b}));
    }
  }
}

TEST(SizingPass, CollapsesShortInteriorEdges) {
  TetMesh m = cube_seed({DomainShape::Cube, 1.0, 0.1});
  const std::size_t before = m.num_vertices();
  const PassSummary s = sizing_pass(m, {0.2});
  EXPECT_GT(s.collapses, 0u);
  EXPECT_LT(m.num_vertices(), before);
  EXPECT_NEAR(enclosed_volume(m), 1.0, 1e-12);
  EXPECT_TRUE(validate(m).ok);
}
