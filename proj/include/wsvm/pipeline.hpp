#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wsvm/energy.hpp"
#include "wsvm/mesh.hpp"
#include "wsvm/quality.hpp"
#include "wsvm/seedgen.hpp"
#include "wsvm/vertex_solver.hpp"

namespace wsvm {

struct PipelineConfig {
  double target_edge = 0.1;
  double eps_theta = 0.01;  // degrees, change of theta_min_avg between outer iterations
  int max_outer_iters = 100;
  double angle_focus = 40.0;  // degrees, gates the flip pass only
  SolverConfig solver;
  bool volume_stage = true;
  bool angle_stage = true;
  bool sizing = true;
  bool flips = true;
  bool validate_each_iteration = true;
  std::uint64_t seed = 1;

  /// Throws InvalidConfig.
  void check() const;
};

struct OpCounts {
  std::size_t flip23 = 0;
  std::size_t edge_removal = 0;
  std::size_t splits = 0;
  std::size_t collapses = 0;
  std::size_t solves = 0;
  std::size_t solves_skipped = 0;  // line search failed or cavity unusable

  std::size_t topological() const { return flip23 + edge_removal + splits + collapses; }
  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

/// State at the end of one outer iteration.
struct TraceEntry {
  int stage = 1;
  WeightScheme scheme = WeightScheme::Constant;
  int iteration = 0;
  double energy_before_solve = 0.0;  // after sizing and flips
  double total_energy = 0.0;         // after the vertex sweep
  double theta_min = 0.0;
  double theta_min_avg = 0.0;
  std::size_t tet_count = 0;
  std::size_t vertex_count = 0;
  OpCounts ops;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct StageResult {
  int stage = 1;
  WeightScheme scheme = WeightScheme::Constant;
  int iterations = 0;
  bool converged = false;  // stopped by eps_theta rather than the iteration cap
  double initial_energy = 0.0;
  double volume_cv_before = 0.0;
  double volume_cv_after = 0.0;

  friend bool operator==(const StageResult&, const StageResult&) = default;
};

struct RunTrace {
  std::vector<TraceEntry> entries;
  std::vector<StageResult> stages;
  double wall_seconds = 0.0;  // informational, not serialized
};

/// Global trace energy: sum over tets of rho * V^2. For InverseOppositeArea a
/// tet has four opposite faces, so rho is the mean of their 1/A.
double total_energy(const TetMesh& mesh, WeightScheme scheme);

/// One optimization stage: repeats sizing, flips and an ascending sweep of
/// vertex solves until theta_min_avg changes by at most eps_theta. Throws
/// ValidationFailure if a checkpoint fails.
StageResult squared_volume_minimizing(TetMesh& mesh, WeightScheme scheme, const PipelineConfig& cfg,
                                      RunTrace& trace, int stage = 1, OperationLog* log = nullptr);

struct WsvmResult {
  TetMesh mesh;
  QualityReport report;
  RunTrace trace;
};

/// Constant-weight stage, then inverse-area stage (each optional).
WsvmResult run_wsvm(TetMesh mesh, const PipelineConfig& cfg, OperationLog* log = nullptr);
WsvmResult run_wsvm(const DomainSpec& domain, const PipelineConfig& cfg, OperationLog* log = nullptr);

}  // namespace wsvm
