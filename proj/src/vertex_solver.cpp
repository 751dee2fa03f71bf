#include "wsvm/vertex_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "wsvm/error.hpp"

namespace wsvm {

namespace {

constexpr double kMaxCondition = 1e12;

// Cholesky solve of an SPD 3x3 system; nullopt if a pivot is not positive.
std::optional<Point3> cholesky_solve(const Mat3& a, const Point3& b) {
  double l[3][3] = {};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(s > 0.0)) return std::nullopt;
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  double y[3];
  for (int i = 0; i < 3; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l[i][k] * y[k];
    y[i] = s / l[i][i];
  }
  Point3 x;
  for (int i = 2; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < 3; ++k) s -= l[k][i] * x[k];
    x[i] = s / l[i][i];
  }
  return x;
}

}  // namespace

void SolverConfig::check() const {
  const bool ok = eps_E > 0.0 && alpha0 > 0.0 && shrink > 0.0 && shrink < 1.0 && armijo_c > 0.0 &&
                  armijo_c < 1.0 && alpha_min > 0.0 && max_newton_iters >= 1 && regularization > 0.0;
  if (!ok) throw Error(ErrorCode::InvalidConfig, "solver configuration out of range");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::StepTooSmall: return "step_too_small";
    case Termination::IterCap: return "iter_cap";
  }
  return "unknown";
}

std::array<double, 3> symmetric_eigenvalues(const Mat3& m) {
  const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
  const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
  if (p1 == 0.0) {
    std::array<double, 3> e = {m[0][0], m[1][1], m[2][2]};
    std::sort(e.begin(), e.end());
    return e;
  }
  const double p2 = (m[0][0] - q) * (m[0][0] - q) + (m[1][1] - q) * (m[1][1] - q) +
                    (m[2][2] - q) * (m[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Mat3 b{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) b[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
  }
  const double det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                       b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                       b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(det_b / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e_max = q + 2.0 * p * std::cos(phi);
  const double e_min = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e_mid = 3.0 * q - e_max - e_min;
  std::array<double, 3> e = {e_min, e_mid, e_max};
  std::sort(e.begin(), e.end());
  return e;
}

NewtonDirection newton_step(const CavityState& state, const Point3& v, const SolverConfig& cfg) {
  NewtonDirection out;
  const Point3 g = local_gradient(state, v);
  if (g == Point3{}) {
    out.zero_gradient = true;
    return out;
  }
  Mat3 h = local_hessian(state);
  const double trace = h[0][0] + h[1][1] + h[2][2];
  if (!(trace > 0.0)) {
    // no curvature at all; fall back to steepest descent
    out.direction = -g;
    return out;
  }
  const auto eig = symmetric_eigenvalues(h);
  double ridge = 0.0;
  if (!(eig[0] > 0.0) || eig[2] / eig[0] > kMaxCondition) ridge = cfg.regularization * trace / 3.0;
  for (;;) {
    Mat3 a = h;
    for (int i = 0; i < 3; ++i) a[i][i] += ridge;
    const bool conditioned =
        ridge == 0.0 || (eig[0] + ridge > 0.0 && (eig[2] + ridge) / (eig[0] + ridge) <= kMaxCondition);
    if (conditioned) {
      if (auto d = cholesky_solve(a, -g)) {
        out.direction = *d;
        out.ridge = ridge;
        break;
      }
    }
    ridge = ridge == 0.0 ? cfg.regularization * trace / 3.0 : ridge * 10.0;
  }
  // a positive definite system always yields descent, but guard against roundoff
  if (dot(out.direction, g) > 0.0) out.direction = -g;
  return out;
}

double line_search(const CavityState& state, const Point3& v, const Point3& d, const SolverConfig& cfg) {
  if (!is_feasible(state, v)) throw Error(ErrorCode::InfeasibleStart, "line search from infeasible point");
  const double e0 = local_energy(state, v);
  const double slope = dot(local_gradient(state, v), d);
  for (double alpha = cfg.alpha0; alpha >= cfg.alpha_min; alpha *= cfg.shrink) {
    const Point3 trial = v + alpha * d;
    if (!is_feasible(state, trial)) continue;
    if (local_energy(state, trial) <= e0 + cfg.armijo_c * alpha * slope) return alpha;
  }
  return 0.0;
}

SolveOutcome solve_cavity(const CavityState& state, const Point3& start, const SolverConfig& cfg) {
  if (!is_feasible(state, start)) throw Error(ErrorCode::InfeasibleStart, "vertex cavity is inverted");
  SolveOutcome out;
  out.position = start;
  out.energy = local_energy(state, start);
  out.energy_trace.push_back(out.energy);
  const double tolerance = cfg.eps_E * out.energy;
  for (int k = 0; k < cfg.max_newton_iters; ++k) {
    const NewtonDirection step = newton_step(state, out.position, cfg);
    if (step.zero_gradient) {
      out.termination = Termination::Converged;
      return out;
    }
    const double alpha = line_search(state, out.position, step.direction, cfg);
    if (alpha == 0.0) {
      out.termination = Termination::StepTooSmall;
      return out;
    }
    const Point3 next = out.position + alpha * step.direction;
    const double e_next = local_energy(state, next);
    const double change = std::abs(e_next - out.energy);
    out.position = next;
    out.energy = e_next;
    out.energy_trace.push_back(e_next);
    out.iterations = k + 1;
    if (change <= tolerance) {
      out.termination = Termination::Converged;
      return out;
    }
  }
  out.termination = Termination::IterCap;
  return out;
}

SolveOutcome solve_vertex(TetMesh& mesh, VertexId v, WeightScheme scheme, const SolverConfig& cfg) {
  const OneRing ring = one_ring(mesh, v);
  const CavityState state = build_cavity(ring, mesh.positions(), scheme);
  SolveOutcome out = solve_cavity(state, mesh.position(v), cfg);
  mesh.set_position(v, out.position);
  return out;
}

}  // namespace wsvm
