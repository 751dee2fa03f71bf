#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wsvm/energy.hpp"
#include "wsvm/geometry.hpp"
#include "wsvm/mesh.hpp"

namespace wsvm::testing {

TetGeom regular_tet(double edge = 1.0);
TetGeom corner_tet();

TetMesh single_tet_mesh(const TetGeom& g);

/// Center vertex 0 at the origin, neighbors at (+-1,0,0), (0,+-1,0), (0,0,+-1),
/// eight tets.
TetMesh octahedron_mesh();

/// Delaunay mesh of a jittered sphere sample around an interior center vertex
/// 0. Always returns a mesh where vertex 0 is Interior.
TetMesh random_star_mesh(std::mt19937_64& rng, int ring_points = 14);

/// Random cavity from random_star_mesh with the center moved to a random
/// feasible position.
CavityState random_cavity(std::mt19937_64& rng, WeightScheme scheme);

/// Random feasible point of the cavity near its center.
Point3 random_feasible_point(std::mt19937_64& rng, const CavityState& state);

/// Cube seed with interior vertices jittered by up to `jitter` * spacing while
/// keeping every tet positive.
TetMesh jittered_cube(std::uint64_t seed, double side = 1.0, double t = 0.25, double jitter = 0.2);

/// Random unit vector.
Point3 random_direction(std::mt19937_64& rng);

/// Random rigid motion applied to p: rotation by a fixed random matrix, then
/// translation.
struct RigidMotion {
  double r[3][3];
  Point3 shift;
  Point3 operator()(const Point3& p) const;
};
RigidMotion random_rigid_motion(std::mt19937_64& rng);

TetGeom transform(const TetGeom& g, const RigidMotion& m);

}  // namespace wsvm::testing
