#include "wsvm/quality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wsvm/error.hpp"

namespace wsvm {

namespace {

using M3 = std::array<std::array<double, 3>, 3>;

double frobenius(const M3& m) {
  double s = 0.0;
  for (const auto& row : m) {
    for (double x : row) s += x * x;
  }
  return std::sqrt(s);
}

M3 multiply(const M3& a, const M3& b) {
  M3 c{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

double determinant(const M3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

M3 inverse(const M3& m, double det) {
  M3 r{};
  r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return r;
}

// Inverse of the edge matrix of the unit regular tet with columns
// (1,0,0), (1/2, sqrt3/2, 0), (1/2, sqrt3/6, sqrt(2/3)).
const M3& regular_inverse() {
  static const M3 inv = [] {
    const double s3 = std::sqrt(3.0);
    const M3 w = {{{1.0, 0.5, 0.5}, {0.0, s3 / 2.0, s3 / 6.0}, {0.0, 0.0, std::sqrt(2.0 / 3.0)}}};
    return inverse(w, determinant(w));
  }();
  return inv;
}

template <class F>
void for_each_tet(const TetMesh& mesh, F&& f) {
  if (mesh.num_tets() == 0) throw Error(ErrorCode::EmptyMesh, "mesh has no tetrahedra");
  for (std::size_t t = 0; t < mesh.tet_slots(); ++t) {
    if (mesh.is_tet_alive(static_cast<TetId>(t))) f(mesh.geom(static_cast<TetId>(t)));
  }
}

template <class Metric>
AvgMax aggregate(const TetMesh& mesh, Metric&& metric) {
  AvgMax out{0.0, -std::numeric_limits<double>::infinity()};
  double sum = 0.0;
  for_each_tet(mesh, [&](const TetGeom& g) {
    const double m = metric(g);
    sum += m;
    out.max = std::max(out.max, m);
  });
  out.avg = sum / static_cast<double>(mesh.num_tets());
  return out;
}

}  // namespace

double tet_edge_ratio(const TetGeom& t) {
  const auto len = edge_lengths(t);
  const auto [lo, hi] = std::minmax_element(len.begin(), len.end());
  return *hi / *lo;
}

double tet_condition_number(const TetGeom& t) {
  const Point3 e1 = t.p1 - t.p0;
  const Point3 e2 = t.p2 - t.p0;
  const Point3 e3 = t.p3 - t.p0;
  const M3 a = {{{e1.x, e2.x, e3.x}, {e1.y, e2.y, e3.y}, {e1.z, e2.z, e3.z}}};
  const M3 s = multiply(a, regular_inverse());
  const double det = determinant(s);
  const double scale = frobenius(s);
  if (!(std::abs(det) > 1e-14 * scale * scale * scale)) {
    throw Error(ErrorCode::DegenerateTet, "singular weighted Jacobian");
  }
  return scale * frobenius(inverse(s, det)) / 3.0;
}

double tet_equiangle_skewness(const TetGeom& t) {
  const std::array<Point3, 4> p = {t.p0, t.p1, t.p2, t.p3};
  constexpr double kEquilateral = 60.0;
  double worst = 0.0;
  for (const auto& f : kTetFaces) {
    if (triangle_area(p[f[0]], p[f[1]], p[f[2]]) <= 0.0) {
      throw Error(ErrorCode::DegenerateFace, "zero-area tet face");
    }
    for (double a : triangle_angles(p[f[0]], p[f[1]], p[f[2]])) {
      worst = std::max({worst, (a - kEquilateral) / (180.0 - kEquilateral), (kEquilateral - a) / kEquilateral});
    }
  }
  return worst;
}

DihedralStats dihedral_stats(const TetMesh& mesh) {
  DihedralStats s{std::numeric_limits<double>::infinity(), 0.0, -std::numeric_limits<double>::infinity(), 0.0};
  for_each_tet(mesh, [&](const TetGeom& g) {
    const auto a = dihedral_angles(g);
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    s.theta_min = std::min(s.theta_min, *lo);
    s.theta_max = std::max(s.theta_max, *hi);
    s.theta_min_avg += *lo;
    s.theta_max_avg += *hi;
  });
  const auto n = static_cast<double>(mesh.num_tets());
  s.theta_min_avg /= n;
  s.theta_max_avg /= n;
  return s;
}

AvgMax edge_ratio(const TetMesh& mesh) { return aggregate(mesh, tet_edge_ratio); }
AvgMax condition_number(const TetMesh& mesh) { return aggregate(mesh, tet_condition_number); }
AvgMax equiangle_skewness(const TetMesh& mesh) { return aggregate(mesh, tet_equiangle_skewness); }

double bad_element_fraction(const TetMesh& mesh) {
  std::size_t bad = 0;
  for_each_tet(mesh, [&](const TetGeom& g) {
    if (min_dihedral_angle(g) < kBadAngleDegrees) ++bad;
  });
  return 100.0 * static_cast<double>(bad) / static_cast<double>(mesh.num_tets());
}

double theta_min_avg(const TetMesh& mesh) { return dihedral_stats(mesh).theta_min_avg; }

double volume_cv(const TetMesh& mesh) {
  std::vector<double> volumes;
  for_each_tet(mesh, [&](const TetGeom& g) { volumes.push_back(signed_volume(g)); });
  const auto n = static_cast<double>(volumes.size());
  double mean = 0.0;
  for (double v : volumes) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : volumes) var += (v - mean) * (v - mean);
  return std::sqrt(var / n) / mean;
}

QualityReport build_report(const TetMesh& mesh) {
  QualityReport r;
  const DihedralStats d = dihedral_stats(mesh);
  r.theta_min = d.theta_min;
  r.theta_min_avg = d.theta_min_avg;
  r.theta_max = d.theta_max;
  r.theta_max_avg = d.theta_max_avg;
  const AvgMax c = condition_number(mesh);
  r.cond_avg = c.avg;
  r.cond_max = c.max;
  const AvgMax e = edge_ratio(mesh);
  r.edge_ratio_avg = e.avg;
  r.edge_ratio_max = e.max;
  const AvgMax s = equiangle_skewness(mesh);
  r.skew_avg = s.avg;
  r.skew_max = s.max;
  r.bad_fraction_percent = bad_element_fraction(mesh);
  r.tet_count = mesh.num_tets();

  r.angle_histogram.assign(kAngleHistogramBins, 0);
  std::vector<double> volumes;
  volumes.reserve(mesh.num_tets());
  for_each_tet(mesh, [&](const TetGeom& g) {
    for (double a : dihedral_angles(g)) {
      const int bin = std::clamp(static_cast<int>(a / 180.0 * kAngleHistogramBins), 0, kAngleHistogramBins - 1);
      ++r.angle_histogram[bin];
    }
    volumes.push_back(signed_volume(g));
  });
  double sum = 0.0;
  for (double v : volumes) sum += v;
  r.volume_mean = sum / static_cast<double>(volumes.size());
  double sq = 0.0;
  for (double v : volumes) sq += (v - r.volume_mean) * (v - r.volume_mean);
  r.volume_std = std::sqrt(sq / static_cast<double>(volumes.size()));
  r.volume_histogram.assign(kVolumeHistogramBins, 0);
  const double top = 3.0 * r.volume_mean;
  for (double v : volumes) {
    const int bin = std::clamp(static_cast<int>(v / top * kVolumeHistogramBins), 0, kVolumeHistogramBins - 1);
    ++r.volume_histogram[bin];
  }
  return r;
}

}  // namespace wsvm
