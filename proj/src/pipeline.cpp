#include "wsvm/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "wsvm/error.hpp"
#include "wsvm/remesh.hpp"

namespace wsvm {

void PipelineConfig::check() const {
  if (!(target_edge > 0.0) || !std::isfinite(target_edge)) {
    throw Error(ErrorCode::InvalidConfig, "target_edge must be positive");
  }
  if (!(eps_theta > 0.0)) throw Error(ErrorCode::InvalidConfig, "eps_theta must be positive");
  if (max_outer_iters < 1) throw Error(ErrorCode::InvalidConfig, "max_outer_iters must be at least 1");
  if (!(angle_focus > 0.0 && angle_focus < 180.0)) {
    throw Error(ErrorCode::InvalidConfig, "angle_focus must be in (0, 180)");
  }
  solver.check();
}

double total_energy(const TetMesh& mesh, WeightScheme scheme) {
  double sum = 0.0;
  for (TetId t : mesh.alive_tets()) {
    const TetGeom g = mesh.geom(t);
    const double v = signed_volume(g);
    double rho = 1.0;
    if (scheme == WeightScheme::InverseOppositeArea) {
      const std::array<Point3, 4> p = {g.p0, g.p1, g.p2, g.p3};
      double inv = 0.0;
      for (const auto& f : kTetFaces) inv += 1.0 / triangle_area(p[f[0]], p[f[1]], p[f[2]]);
      rho = inv / 4.0;
    }
    sum += rho * v * v;
  }
  return sum;
}

StageResult squared_volume_minimizing(TetMesh& mesh, WeightScheme scheme, const PipelineConfig& cfg,
                                      RunTrace& trace, int stage, OperationLog* log) {
  cfg.check();
  check_valid(mesh);
  StageResult result;
  result.stage = stage;
  result.scheme = scheme;
  result.initial_energy = total_energy(mesh, scheme);
  result.volume_cv_before = volume_cv(mesh);
  const SizingRule rule{cfg.target_edge};

  double prev_theta = theta_min_avg(mesh);
  for (int iter = 1; iter <= cfg.max_outer_iters; ++iter) {
    TraceEntry entry;
    entry.stage = stage;
    entry.scheme = scheme;
    entry.iteration = iter;

    if (cfg.sizing) {
      const PassSummary s = sizing_pass(mesh, rule, log);
      entry.ops.splits = s.splits;
      entry.ops.collapses = s.collapses;
    }
    if (cfg.flips) {
      const PassSummary f = improvement_pass(mesh, cfg.angle_focus, log);
      entry.ops.flip23 = f.flip23_accepted;
      entry.ops.edge_removal = f.edge_removal_accepted;
    }

    entry.energy_before_solve = total_energy(mesh, scheme);
    for (VertexId v : mesh.interior_vertices()) {
      try {
        const SolveOutcome out = solve_vertex(mesh, v, scheme, cfg.solver);
        // A failed line search keeps the last accepted iterate.
        if (out.termination == Termination::StepTooSmall) {
          ++entry.ops.solves_skipped;
        } else {
          ++entry.ops.solves;
        }
        if (log) {
          log->append({OpKind::VertexSolve, {v}, true, std::string(to_string(out.termination)),
                       out.energy_trace.front(), out.energy});
        }
      } catch (const Error& e) {
        // An infeasible start or a collapsed opposite face leaves v in place.
        if (e.code() != ErrorCode::InfeasibleStart && e.code() != ErrorCode::DegenerateFace) throw;
        ++entry.ops.solves_skipped;
        if (log) log->append({OpKind::VertexSolve, {v}, false, e.what(), 0.0, 0.0});
      }
    }
    entry.total_energy = total_energy(mesh, scheme);

    if (cfg.validate_each_iteration) {
      const ValidationResult vr = validate(mesh);
      if (!vr.ok) {
        throw Error(ErrorCode::ValidationFailure,
                    "stage " + std::to_string(stage) + " iteration " + std::to_string(iter) + ": " + vr.message);
      }
    }

    const DihedralStats ds = dihedral_stats(mesh);
    entry.theta_min = ds.theta_min;
    entry.theta_min_avg = ds.theta_min_avg;
    entry.tet_count = mesh.num_tets();
    entry.vertex_count = mesh.num_vertices();
    trace.entries.push_back(entry);
    result.iterations = iter;

    if (std::abs(ds.theta_min_avg - prev_theta) <= cfg.eps_theta) {
      result.converged = true;
      break;
    }
    prev_theta = ds.theta_min_avg;
  }
  result.volume_cv_after = volume_cv(mesh);
  trace.stages.push_back(result);
  return result;
}

WsvmResult run_wsvm(TetMesh mesh, const PipelineConfig& cfg, OperationLog* log) {
  cfg.check();
  const auto start = std::chrono::steady_clock::now();
  WsvmResult out;
  if (cfg.volume_stage) squared_volume_minimizing(mesh, WeightScheme::Constant, cfg, out.trace, 1, log);
  if (cfg.angle_stage) squared_volume_minimizing(mesh, WeightScheme::InverseOppositeArea, cfg, out.trace, 2, log);
  check_valid(mesh);
  out.mesh = compacted(mesh);
  out.report = build_report(out.mesh);
  out.trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

WsvmResult run_wsvm(const DomainSpec& domain, const PipelineConfig& cfg, OperationLog* log) {
  return run_wsvm(seed_mesh(domain, cfg.seed), cfg, log);
}

}  // namespace wsvm
