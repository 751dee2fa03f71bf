#pragma once

#include <array>

#include "wsvm/point3.hpp"

namespace wsvm {

/// Four positions of a tetrahedron. When extracted from a one-ring cell, p0 is
/// the free (center) vertex.
struct TetGeom {
  Point3 p0, p1, p2, p3;
};

/// The opposite-face triple of a one-ring cell, (v_mj, v_mk, v_ml).
struct FaceTriple {
  Point3 j, k, l;
};

/// Oriented volume det[p1-p0, p2-p0, p3-p0] / 6. Positive for the
/// right-handed corner (0,0,0),(1,0,0),(0,1,0),(0,0,1).
double signed_volume(const TetGeom& t);
double signed_volume(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

/// s_m = (v_mj - v_ml) x (v_mk - v_ml). Its norm is twice the face area.
Point3 opposite_face_vector(const FaceTriple& f);

/// Volume of the cell (center, triple) as the scalar triple product
/// (1/6) (v_mk - v_ml) . ((center - v_ml) x (v_mj - v_ml)), i.e.
/// (center - v_ml) . s_m / 6. Equals signed_volume(center, k, j, l).
double cell_volume(const Point3& center, const FaceTriple& f);

/// f_m(center) = 6 * cell_volume(center, f). The feasibility constraint is f_m > 0.
double constraint_value(const Point3& center, const FaceTriple& f);

/// |s_m| / 2. Throws DegenerateFace when the area is at or below `min_area`.
double opposite_face_area(const FaceTriple& f, double min_area = 0.0);

double triangle_area(const Point3& a, const Point3& b, const Point3& c);

/// Interior dihedral angles in degrees along edges (01, 02, 03, 12, 13, 23).
/// Throws DegenerateTet when the signed volume is not positive.
std::array<double, 6> dihedral_angles(const TetGeom& t);

/// Same as dihedral_angles but without the volume check; inverted or flat
/// tets produce meaningless values.
std::array<double, 6> dihedral_angles_unchecked(const TetGeom& t);

double min_dihedral_angle(const TetGeom& t);

/// Lengths of the six edges in the same order as dihedral_angles.
std::array<double, 6> edge_lengths(const TetGeom& t);

/// The three interior angles (degrees) of triangle (a,b,c) at a, b, c.
std::array<double, 3> triangle_angles(const Point3& a, const Point3& b, const Point3& c);

/// Local vertex pairs for the six tet edges, matching dihedral_angles.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

}  // namespace wsvm
