#pragma once

#include <cstddef>
#include <vector>

#include "wsvm/geometry.hpp"
#include "wsvm/mesh.hpp"

namespace wsvm {

inline constexpr int kAngleHistogramBins = 60;   // over [0, 180] degrees
inline constexpr int kVolumeHistogramBins = 50;  // over [0, 3 * mean volume]
inline constexpr double kBadAngleDegrees = 30.0;

struct DihedralStats {
  double theta_min = 0.0;
  double theta_min_avg = 0.0;
  double theta_max = 0.0;
  double theta_max_avg = 0.0;
};

struct AvgMax {
  double avg = 0.0;
  double max = 0.0;
};

struct QualityReport {
  double theta_min = 0.0;
  double theta_min_avg = 0.0;
  double theta_max = 0.0;
  double theta_max_avg = 0.0;
  double cond_avg = 0.0;
  double cond_max = 0.0;
  double edge_ratio_avg = 0.0;
  double edge_ratio_max = 0.0;
  double skew_avg = 0.0;
  double skew_max = 0.0;
  double bad_fraction_percent = 0.0;
  std::size_t tet_count = 0;
  std::vector<std::size_t> angle_histogram;   // all 6 dihedrals of every tet
  std::vector<std::size_t> volume_histogram;  // one entry per tet
  double volume_mean = 0.0;
  double volume_std = 0.0;

  friend bool operator==(const QualityReport&, const QualityReport&) = default;
};

// Per-tet metrics.

/// Longest over shortest edge length.
double tet_edge_ratio(const TetGeom& t);

/// ||S||_F ||S^-1||_F / 3 with S = A W^-1, A the edge matrix of the tet and W
/// that of the unit regular tet. Throws DegenerateTet when S is singular.
double tet_condition_number(const TetGeom& t);

/// Worst normalized deviation of the 12 face angles from 60 degrees.
double tet_equiangle_skewness(const TetGeom& t);

// Mesh aggregates. All throw EmptyMesh when the mesh has no tets.

DihedralStats dihedral_stats(const TetMesh& mesh);
AvgMax edge_ratio(const TetMesh& mesh);
AvgMax condition_number(const TetMesh& mesh);
AvgMax equiangle_skewness(const TetMesh& mesh);
double bad_element_fraction(const TetMesh& mesh);

/// Mean over tets of the per-tet minimum dihedral angle.
double theta_min_avg(const TetMesh& mesh);

/// Coefficient of variation (std / mean) of tet volumes.
double volume_cv(const TetMesh& mesh);

QualityReport build_report(const TetMesh& mesh);

}  // namespace wsvm
