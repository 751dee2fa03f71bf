#include "wsvm/energy.hpp"

#include <algorithm>
#include <limits>

#include "wsvm/error.hpp"

namespace wsvm {

std::string_view to_string(WeightScheme scheme) {
  return scheme == WeightScheme::Constant ? "constant" : "inverse_opposite_area";
}

CavityState build_cavity(const Point3& center, std::span<const FaceTriple> faces, WeightScheme scheme) {
  CavityState state;
  state.center = center;
  state.cells.reserve(faces.size());

  Point3 lo = center;
  Point3 hi = center;
  for (const FaceTriple& f : faces) {
    for (const Point3* p : {&f.j, &f.k, &f.l}) {
      for (int i = 0; i < 3; ++i) {
        lo[i] = std::min(lo[i], (*p)[i]);
        hi[i] = std::max(hi[i], (*p)[i]);
      }
    }
  }
  const double diag = distance(lo, hi);
  state.feasibility_eps = 1e-14 * diag * diag * diag;
  const double min_area = 1e-14 * diag * diag;

  for (const FaceTriple& f : faces) {
    CavityCell cell;
    cell.face = f;
    cell.s = opposite_face_vector(f);
    if (scheme == WeightScheme::InverseOppositeArea) {
      cell.weight = 1.0 / opposite_face_area(f, min_area);
    }
    state.cells.push_back(cell);
  }
  return state;
}

CavityState build_cavity(const OneRing& ring, std::span<const Point3> positions, WeightScheme scheme) {
  std::vector<FaceTriple> faces;
  faces.reserve(ring.cells.size());
  for (const OneRingCell& c : ring.cells) {
    faces.push_back({positions[c.triple[0]], positions[c.triple[1]], positions[c.triple[2]]});
  }
  return build_cavity(positions[ring.center], faces, scheme);
}

double local_energy(const CavityState& state, const Point3& v) {
  double e = 0.0;
  for (const CavityCell& c : state.cells) {
    const double vol = dot(v - c.face.l, c.s) / 6.0;
    e += c.weight * vol * vol;
  }
  return e;
}

Point3 local_gradient(const CavityState& state, const Point3& v) {
  Point3 g;
  for (const CavityCell& c : state.cells) {
    const double vol = dot(v - c.face.l, c.s) / 6.0;
    g += (c.weight * vol / 3.0) * c.s;
  }
  return g;
}

Mat3 local_hessian(const CavityState& state) {
  Mat3 h{};
  for (const CavityCell& c : state.cells) {
    for (int r = 0; r < 3; ++r) {
      for (int q = 0; q < 3; ++q) h[r][q] += c.weight * c.s[r] * c.s[q];
    }
  }
  for (auto& row : h) {
    for (double& x : row) x /= 18.0;
  }
  return h;
}

bool is_feasible(const CavityState& state, const Point3& v) {
  return std::all_of(state.cells.begin(), state.cells.end(), [&](const CavityCell& c) {
    return dot(v - c.face.l, c.s) > state.feasibility_eps;
  });
}

}  // namespace wsvm
