#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wsvm/mesh.hpp"

namespace wsvm {

enum class DomainShape { Cube, Ball };

/// Convex analytic domain. Cubes span [0, size]^3; balls are centered at the
/// origin with radius `size`.
struct DomainSpec {
  DomainShape shape = DomainShape::Ball;
  double size = 1.0;
  double target_edge = 0.1;

  /// Throws InvalidDomain.
  void check() const;
};

/// Regular grid of about target_edge spacing, six tets per cell. Throws
/// ResolutionTooCoarse below two cells per side.
TetMesh cube_seed(const DomainSpec& spec);

/// Delaunay tetrahedralization of the convex hull of `points` by incremental
/// Bowyer-Watson insertion in a seeded random order. Throws DegenerateInput
/// (fewer than 4 points or all coplanar) or DuplicatePoints.
TetMesh delaunay_points(std::span<const Point3> points, std::uint64_t seed = 1);

/// Body-centered-cubic interior lattice plus quasi-uniform sphere samples at
/// about target_edge spacing, tetrahedralized by delaunay_points.
TetMesh ball_seed(const DomainSpec& spec, std::uint64_t seed = 1);

/// Point set used by ball_seed; sphere samples come first.
std::vector<Point3> ball_points(const DomainSpec& spec);

TetMesh seed_mesh(const DomainSpec& spec, std::uint64_t seed = 1);

}  // namespace wsvm
