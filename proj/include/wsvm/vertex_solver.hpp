#pragma once

#include <vector>

#include "wsvm/energy.hpp"
#include "wsvm/mesh.hpp"

namespace wsvm {

struct SolverConfig {
  double eps_E = 1e-10;  // relative to the cavity's initial energy
  double alpha0 = 1.0;
  double shrink = 0.8;
  double armijo_c = 0.01;
  double alpha_min = 1e-12;
  int max_newton_iters = 30;
  double regularization = 1e-12;  // ridge as a fraction of trace(H)/3

  /// Throws InvalidConfig if a field is out of range.
  void check() const;
};

enum class Termination { Converged, StepTooSmall, IterCap };

std::string_view to_string(Termination t);

struct SolveOutcome {
  Point3 position;
  double energy = 0.0;
  int iterations = 0;
  Termination termination = Termination::Converged;
  std::vector<double> energy_trace;  // initial energy first
};

struct NewtonDirection {
  Point3 direction;
  bool zero_gradient = false;
  double ridge = 0.0;  // lambda actually added to the diagonal
};

/// Solves (H + lambda I) d = -g, with lambda > 0 only when H is numerically
/// singular (condition estimate above 1e12).
NewtonDirection newton_step(const CavityState& state, const Point3& v, const SolverConfig& cfg);

/// Backtracking over alpha0 * shrink^k for the first step that keeps every
/// cell feasible and satisfies the Armijo condition. Returns 0 when no step
/// above alpha_min qualifies. Throws InfeasibleStart if v is infeasible.
double line_search(const CavityState& state, const Point3& v, const Point3& d, const SolverConfig& cfg);

/// Newton iterations with feasible line search on a frozen cavity.
SolveOutcome solve_cavity(const CavityState& state, const Point3& start, const SolverConfig& cfg);

/// Solves for interior vertex v and writes the final position to the mesh.
/// Weights are rebuilt from the current neighbor positions on every call.
SolveOutcome solve_vertex(TetMesh& mesh, VertexId v, WeightScheme scheme, const SolverConfig& cfg);

/// Eigenvalues of a symmetric 3x3 matrix in ascending order.
std::array<double, 3> symmetric_eigenvalues(const Mat3& m);

}  // namespace wsvm
