#include "wsvm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wsvm/error.hpp"

namespace wsvm {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double angle_between(const Point3& a, const Point3& b) {
  return std::atan2(norm(cross(a, b)), dot(a, b)) * kRadToDeg;
}

}  // namespace

double signed_volume(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  return dot(b - a, cross(c - a, d - a)) / 6.0;
}

double signed_volume(const TetGeom& t) { return signed_volume(t.p0, t.p1, t.p2, t.p3); }

Point3 opposite_face_vector(const FaceTriple& f) { return cross(f.j - f.l, f.k - f.l); }

double cell_volume(const Point3& center, const FaceTriple& f) {
  return dot(f.k - f.l, cross(center - f.l, f.j - f.l)) / 6.0;
}

double constraint_value(const Point3& center, const FaceTriple& f) {
  return dot(f.k - f.l, cross(center - f.l, f.j - f.l));
}

double triangle_area(const Point3& a, const Point3& b, const Point3& c) {
  return 0.5 * norm(cross(b - a, c - a));
}

double opposite_face_area(const FaceTriple& f, double min_area) {
  const double area = 0.5 * norm(opposite_face_vector(f));
  if (!(area > min_area)) {
    throw Error(ErrorCode::DegenerateFace, "opposite face area " + std::to_string(area));
  }
  return area;
}

std::array<double, 6> dihedral_angles_unchecked(const TetGeom& t) {
  const std::array<Point3, 4> p = {t.p0, t.p1, t.p2, t.p3};
  std::array<double, 6> out{};
  for (int e = 0; e < 6; ++e) {
    const int i = kTetEdges[e][0];
    const int j = kTetEdges[e][1];
    // the two remaining vertices span the faces adjacent to edge (i,j)
    int k = -1;
    int l = -1;
    for (int m = 0; m < 4; ++m) {
      if (m == i || m == j) continue;
      (k < 0 ? k : l) = m;
    }
    const Point3 axis = p[j] - p[i];
    const Point3 n1 = cross(axis, p[k] - p[i]);
    const Point3 n2 = cross(axis, p[l] - p[i]);
    out[e] = angle_between(n1, n2);
  }
  return out;
}

std::array<double, 6> dihedral_angles(const TetGeom& t) {
  const double vol = signed_volume(t);
  if (!(vol > 0.0)) {
    throw Error(ErrorCode::DegenerateTet, "dihedral angles of non-positive tet, volume " +
                                              std::to_string(vol));
  }
  return dihedral_angles_unchecked(t);
}

double min_dihedral_angle(const TetGeom& t) {
  const auto a = dihedral_angles_unchecked(t);
  return *std::min_element(a.begin(), a.end());
}

std::array<double, 6> edge_lengths(const TetGeom& t) {
  const std::array<Point3, 4> p = {t.p0, t.p1, t.p2, t.p3};
  std::array<double, 6> out{};
  for (int e = 0; e < 6; ++e) out[e] = distance(p[kTetEdges[e][0]], p[kTetEdges[e][1]]);
  return out;
}

std::array<double, 3> triangle_angles(const Point3& a, const Point3& b, const Point3& c) {
  return {angle_between(b - a, c - a), angle_between(a - b, c - b), angle_between(a - c, b - c)};
}

}  // namespace wsvm
