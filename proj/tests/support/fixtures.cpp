#include "support/fixtures.hpp"

#include <Eigen/Geometry>

#include <cmath>

#include "wsvm/seedgen.hpp"

namespace wsvm::testing {

TetGeom regular_tet(double edge) {
  const double s = edge / std::sqrt(8.0);
  return {{s, s, s}, {s, -s, -s}, {-s, -s, s}, {-s, s, -s}};
}

TetGeom corner_tet() { return {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}; }

TetMesh single_tet_mesh(const TetGeom& g) { return TetMesh({g.p0, g.p1, g.p2, g.p3}, {{0, 1, 2, 3}}); }

TetMesh octahedron_mesh() {
  std::vector<Point3> v = {{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<Tet> tets;
  for (VertexId x : {1, 2}) {
    for (VertexId y : {3, 4}) {
      for (VertexId z : {5, 6}) tets.push_back({0, x, y, z});
    }
  }
  return TetMesh(std::move(v), std::move(tets));
}

Point3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    const Point3 p{n(rng), n(rng), n(rng)};
    const double len = norm(p);
    if (len > 1e-6) return p / len;
  }
}

TetMesh random_star_mesh(std::mt19937_64& rng, int ring_points) {
  std::uniform_real_distribution<double> radius(0.7, 1.3);
  std::uniform_real_distribution<double> offset(-0.15, 0.15);
  for (;;) {
    std::vector<Point3> pts = {{offset(rng), offset(rng), offset(rng)}};
    for (int i = 0; i < ring_points; ++i) pts.push_back(radius(rng) * random_direction(rng));
    TetMesh m = delaunay_points(pts, rng());
    if (m.is_interior(0)) return m;
  }
}

Point3 random_feasible_point(std::mt19937_64& rng, const CavityState& state) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double scale = 0.3;; scale *= 0.5) {
    for (int tries = 0; tries < 20; ++tries) {
      const Point3 p = state.center + scale * Point3{u(rng), u(rng), u(rng)};
      if (is_feasible(state, p)) return p;
    }
  }
}

CavityState random_cavity(std::mt19937_64& rng, WeightScheme scheme) {
  const TetMesh m = random_star_mesh(rng);
  CavityState state = build_cavity(one_ring(m, 0), m.positions(), scheme);
  state.center = random_feasible_point(rng, state);
  return state;
}

TetMesh jittered_cube(std::uint64_t seed, double side, double t, double jitter) {
  TetMesh m = cube_seed({DomainShape::Cube, side, t});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = side / std::lround(side / t);
  const double floor = 1e-3 * h * h * h;
  for (VertexId v : m.interior_vertices()) {
    const Point3 old = m.position(v);
    m.set_position(v, old + jitter * h * Point3{u(rng), u(rng), u(rng)});
    for (TetId c : m.tets_of_vertex(v)) {
      if (m.tet_volume(c) <= floor) {
        m.set_position(v, old);
        break;
      }
    }
  }
  return m;
}

Point3 RigidMotion::operator()(const Point3& p) const {
  Point3 q;
  for (int i = 0; i < 3; ++i) q[i] = r[i][0] * p.x + r[i][1] * p.y + r[i][2] * p.z;
  return q + shift;
}

RigidMotion random_rigid_motion(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  const Eigen::Matrix3d r = q.toRotationMatrix();
  RigidMotion m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m.r[i][j] = r(i, j);
  }
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  m.shift = {u(rng), u(rng), u(rng)};
  return m;
}

TetGeom transform(const TetGeom& g, const RigidMotion& m) { return {m(g.p0), m(g.p1), m(g.p2), m(g.p3)}; }

}  // namespace wsvm::testing
