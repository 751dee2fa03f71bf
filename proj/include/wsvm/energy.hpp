#pragma once

#include <array>
#include <span>
#include <vector>

#include "wsvm/geometry.hpp"
#include "wsvm/mesh.hpp"
#include "wsvm/point3.hpp"

namespace wsvm {

/// How cell weights rho_m are chosen.
///  - Constant: rho_m = 1, pushes toward uniform volumes.
///  - InverseOppositeArea: rho_m = 1 / A_m, pushes toward uniform heights over
///    the opposite faces and hence uniform dihedral angles.
enum class WeightScheme { Constant, InverseOppositeArea };

std::string_view to_string(WeightScheme scheme);

/// Symmetric 3x3 matrix, row-major.
using Mat3 = std::array<std::array<double, 3>, 3>;

struct CavityCell {
  double weight = 1.0;  // rho_m
  Point3 s;             // s_m
  FaceTriple face;      // (v_mj, v_mk, v_ml)
};

/// Frozen per-solve data for one interior vertex. Weights and s_m depend only
/// on the opposite faces, so they stay valid while the center moves.
struct CavityState {
  Point3 center;
  std::vector<CavityCell> cells;
  /// Constraint values must exceed this for a position to count as feasible.
  double feasibility_eps = 0.0;
};

/// Builds the cavity for `ring` using the current mesh positions. Throws
/// DegenerateFace for InverseOppositeArea when an opposite face collapses.
CavityState build_cavity(const OneRing& ring, std::span<const Point3> positions, WeightScheme scheme);

/// Same as above from explicit geometry (center plus opposite faces).
CavityState build_cavity(const Point3& center, std::span<const FaceTriple> faces, WeightScheme scheme);

/// E(v) = sum_m rho_m V_m(v)^2.
double local_energy(const CavityState& state, const Point3& v);

/// g(v) = sum_m (1/3) rho_m V_m(v) s_m.
Point3 local_gradient(const CavityState& state, const Point3& v);

/// H = (1/18) sum_m rho_m s_m s_m^T. Independent of the center position.
Mat3 local_hessian(const CavityState& state);

/// True iff every constraint value f_m(v) exceeds the feasibility threshold.
bool is_feasible(const CavityState& state, const Point3& v);

}  // namespace wsvm
