// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "wsvm/error.hpp"
#include "wsvm/mesh_io.hpp"
#include "wsvm/pipeline.hpp"
#include "wsvm/predicates.hpp"
#include "wsvm/remesh.hpp"
#include "wsvm/report.hpp"
#include "wsvm/seedgen.hpp"

using namespace wsvm;
using namespace wsvm::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int g_failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("%s  criterion %2d  %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double cavity_scale(const CavityState& s) {
  double r = 0.0;
  for (const auto& c : s.cells) r = std::max({r, distance(s.center, c.face.j), distance(s.center, c.face.k), distance(s.center, c.face.l)});
  return r;
}

double frob(const Mat3& m) {
  double s = 0.0;
  for (const auto& row : m) {
    for (double x : row) s += x * x;
  }
  return std::sqrt(s);
}

double trace_of(const Mat3& m) { return m[0][0] + m[1][1] + m[2][2]; }

double quad_form(const Mat3& h, const Point3& x) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) s += x[i] * h[i][j] * x[j];
  }
  return s;
}

// Solves H d = -g by Cramer's rule (H assumed nonsingular).
Point3 solve3(const Mat3& h, const Point3& rhs) {
  auto det = [](const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double d = det(h);
  Point3 x;
  for (int c = 0; c < 3; ++c) {
    Mat3 m = h;
    for (int r = 0; r < 3; ++r) m[r][c] = rhs[r];
    x[c] = det(m) / d;
  }
  return x;
}

// ---------------------------------------------------------------------------

void criterion1() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  double worst_grad = 0.0, worst_hess = 0.0;
  for (WeightScheme scheme : {WeightScheme::Constant, WeightScheme::InverseOppositeArea}) {
    for (int i = 0; i < 200; ++i) {
      const CavityState s = random_cavity(rng, scheme);
      const Point3 v = s.center;
      const double h = 1e-6 * cavity_scale(s);
      const Point3 g = local_gradient(s, v);
      Point3 fd;
      for (int k = 0; k < 3; ++k) {
        Point3 a = v, b = v;
        a[k] += h;
        b[k] -= h;
        fd[k] = (local_energy(s, a) - local_energy(s, b)) / (2 * h);
      }
      worst_grad = std::max(worst_grad, norm(g - fd) / std::max(norm(fd), 1e-300));

      const Mat3 H = local_hessian(s);
      const double hh = 1e-4 * cavity_scale(s);
      Mat3 fdh{};
      for (int k = 0; k < 3; ++k) {
        Point3 a = v, b = v;
        a[k] += hh;
        b[k] -= hh;
        const Point3 col = (local_gradient(s, a) - local_gradient(s, b)) / (2 * hh);
        for (int r = 0; r < 3; ++r) fdh[r][k] = col[r];
      }
      Mat3 diff{};
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) diff[r][c] = H[r][c] - fdh[r][c];
      }
      worst_hess = std::max(worst_hess, frob(diff) / frob(H));
    }
  }
  const double secs = seconds_since(start);
  report(1, worst_grad <= 1e-6 && worst_hess <= 1e-5 && secs < 10.0, "gradient/Hessian vs finite differences",
         fmt("max grad rel err %.2e (<= 1e-6), max Hessian rel err %.2e (<= 1e-5), %.2f s (< 10 s)", worst_grad,
             worst_hess, secs));
}

void criterion2() {
  std::mt19937_64 rng(1002);
  double worst = std::numeric_limits<double>::infinity();
  bool psd = true;
  for (int i = 0; i < 1000; ++i) {
    const CavityState s = random_cavity(rng, i % 2 ? WeightScheme::Constant : WeightScheme::InverseOppositeArea);
    const Mat3 H = local_hessian(s);
    const Point3 x = random_direction(rng) * std::exp(std::uniform_real_distribution<double>(-3, 3)(rng));
    const double q = quad_form(H, x) / (trace_of(H) * dot(x, x));
    worst = std::min(worst, q);
    psd &= quad_form(H, x) >= -1e-12 * trace_of(H) * dot(x, x);
  }
  int midpoint_failures = 0;
  for (int i = 0; i < 500; ++i) {
    const CavityState s = random_cavity(rng, WeightScheme::Constant);
    const Point3 a = random_feasible_point(rng, s);
    const Point3 b = random_feasible_point(rng, s);
    midpoint_failures += !is_feasible(s, 0.5 * (a + b));
  }
  report(2, psd && midpoint_failures == 0, "convexity",
         fmt("min x.Hx/(tr(H)|x|^2) %.3e over 1000 pairs (>= -1e-12), infeasible midpoints %d/500", worst,
             midpoint_failures));
}

void criterion3() {
  std::mt19937_64 rng(1003);
  double worst = 0.0;
  int done = 0;
  while (done < 100) {
    const CavityState s = random_cavity(rng, done % 2 ? WeightScheme::Constant : WeightScheme::InverseOppositeArea);
    const Mat3 H = local_hessian(s);
    const auto ev = symmetric_eigenvalues(H);
    if (!(ev[0] > 1e-8 * ev[2])) continue;  // singular
    ++done;
    const Point3 g0 = local_gradient(s, s.center);
    const NewtonDirection d = newton_step(s, s.center, {});
    const Point3 g1 = local_gradient(s, s.center + d.direction);
    worst = std::max(worst, norm(g1) / norm(g0));
  }
  report(3, worst <= 1e-10, "quadratic exactness of one Newton step",
         fmt("max |g1|/|g0| %.2e over 100 cavities (<= 1e-10)", worst));
}

// Flip-only improvement sweep over the seed, checking enclosed volume after
// every accepted flip.
struct FlipAudit {
  std::size_t accepted = 0;
  double worst_rel = 0.0;
};

FlipAudit audit_flips(TetMesh mesh) {
  FlipAudit audit;
  const double v0 = enclosed_volume(mesh);
  auto check = [&](const FlipProposal& p) {
    if (!p.applied()) return false;
    ++audit.accepted;
    audit.worst_rel = std::max(audit.worst_rel, std::abs(enclosed_volume(mesh) - v0) / v0);
    return true;
  };
  for (TetId t : mesh.alive_tets()) {
    if (!mesh.is_tet_alive(t) || min_dihedral_angle(mesh.geom(t)) >= 40.0) continue;
    bool changed = false;
    for (int k = 0; k < 4 && !changed; ++k) {
      if (mesh.neighbor(t, k) != kNoId) changed = check(flip23(mesh, t, k));
    }
    for (int e = 0; e < 6 && !changed; ++e) {
      const Tet tet = mesh.tet(t);
      const EdgeKey key = EdgeKey::make(tet[kTetEdges[e][0]], tet[kTetEdges[e][1]]);
      if (!mesh.is_boundary_edge(key)) changed = check(remove_edge_nm(mesh, key));
    }
  }
  return audit;
}

struct BallRuns {
  WsvmResult full;
  double full_seconds = 0.0;
  std::string full_error;
  WsvmResult angle_only;
  WsvmResult volume_only;
};

PipelineConfig ball_config(double t) {
  PipelineConfig cfg;
  cfg.target_edge = t;
  return cfg;
}

void criterion4(const BallRuns& runs, const TetMesh& seed) {
  const FlipAudit audit = audit_flips(seed);
  const bool ok_run = runs.full_error.empty();
  const bool pass = ok_run && audit.worst_rel <= 1e-12 && audit.accepted > 0 && runs.full_seconds < 300.0;
  std::string detail;
  if (ok_run) {
    std::size_t checkpoints = runs.full.trace.entries.size();
    detail = fmt("seed %zu tets, %zu validated checkpoints, final %zu tets, %.1f s (< 300 s); ", seed.num_tets(),
                 checkpoints, runs.full.mesh.num_tets(), runs.full_seconds);
  } else {
    detail = "run failed: " + runs.full_error + "; ";
  }
  detail += fmt("flip audit on the seed: %zu accepted flips, worst enclosed-volume rel change %.2e (<= 1e-12)",
                audit.accepted, audit.worst_rel);
  report(4, pass, "safety on ball r=1 t=0.1", detail);
}

void criterion5(const BallRuns& runs) {
  if (!runs.full_error.empty()) {
    report(5, false, "Table I targets on ball", "full run failed");
    return;
  }
  const QualityReport& q = runs.full.report;
  const bool pass = q.theta_min_avg >= 50.0 && q.theta_max_avg <= 98.0 && q.cond_avg <= 1.20 &&
                    q.edge_ratio_avg <= 1.55 && q.skew_avg <= 0.32 && q.bad_fraction_percent <= 0.5;
  report(5, pass, "Table I targets on ball",
         fmt("theta_min_avg %.2f (>= 50), theta_max_avg %.2f (<= 98), c_avg %.4f (<= 1.20), e_avg %.4f (<= 1.55), "
             "s_avg %.4f (<= 0.32), P %.4f%% (<= 0.5%%)",
             q.theta_min_avg, q.theta_max_avg, q.cond_avg, q.edge_ratio_avg, q.skew_avg, q.bad_fraction_percent));
}

void criterion6(const std::vector<std::pair<double, const RunTrace*>>& runs) {
  std::string detail;
  std::vector<double> cv;
  for (const auto& [t, trace] : runs) {
    const double c = trace->stages.at(0).volume_cv_after;
    cv.push_back(c);
    detail += fmt("t=%.1f: CV %.4f -> %.4f; ", t, trace->stages.at(0).volume_cv_before, c);
  }
  bool pass = true;
  for (std::size_t i = 1; i < cv.size(); ++i) pass &= cv[i] < cv[i - 1];
  detail += "post-stage-1 CV strictly decreasing with resolution";
  report(6, pass, "volume-uniformity trend", detail);
}

void criterion7(const BallRuns& runs) {
  const double p_full = runs.full.report.bad_fraction_percent;
  const double p_angle = runs.angle_only.report.bad_fraction_percent;
  const double cv_full = volume_cv(runs.full.mesh);
  const double cv_volume = volume_cv(runs.volume_only.mesh);
  report(7, p_full < p_angle && cv_full < cv_volume, "ablation on ball t=0.1",
         fmt("P full %.4f%% < angle-only %.4f%%; CV full %.4f < volume-only %.4f", p_full, p_angle, cv_full,
             cv_volume));
}

// Star of n tets around the edge (n, n+1) with a jittered convex ring.
TetMesh random_star(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point3> v;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * (i + 0.3 * u(rng)) / n;
    const double r = 1.0 + 0.3 * u(rng);
    v.push_back({r * std::cos(a), r * std::sin(a), 0.3 * u(rng)});
  }
  v.push_back({0.2 * u(rng), 0.2 * u(rng), -0.4 - 0.8 * (u(rng) + 1)});
  v.push_back({0.2 * u(rng), 0.2 * u(rng), 0.4 + 0.8 * (u(rng) + 1)});
  std::vector<Tet> tets;
  for (int i = 0; i < n; ++i) tets.push_back({n, n + 1, i, (i + 1) % n});
  return TetMesh(std::move(v), std::move(tets));
}

std::set<std::array<VertexId, 4>> element_set(const TetMesh& m) {
  std::set<std::array<VertexId, 4>> out;
  for (TetId t : m.alive_tets()) {
    Tet q = m.tet(t);
    std::sort(q.begin(), q.end());
    out.insert(q);
  }
  return out;
}

void criterion8() {
  // flip round trip
  const double s3 = std::sqrt(3.0) / 2.0;
  TetMesh bi({{1, 0, 0}, {-0.5, s3, 0}, {-0.5, -s3, 0}, {0, 0, 0.2}, {0, 0, -0.2}}, {{0, 1, 2, 3}, {0, 2, 1, 4}});
  const auto original = element_set(bi);
  bool roundtrip = flip23(bi, FaceKey::make(0, 1, 2)).applied();
  bi.set_position(3, {0, 0, 1});
  bi.set_position(4, {0, 0, -1});
  roundtrip = roundtrip && flip32(bi, EdgeKey::make(3, 4)).applied() && element_set(bi) == original;

  // n-to-m against brute force
  std::mt19937_64 rng(1008);
  int stars = 0, mismatches = 0, applied = 0;
  for (int n : {4, 5}) {
    for (int i = 0; i < 100;) {
      TetMesh m;
      try {
        m = random_star(rng, n);
      } catch (const Error&) {
        continue;  // degenerate draw
      }
      const EdgeKey e = EdgeKey::make(n, n + 1);
      const EdgeStar star = edge_star(m, e);
      if (!star.closed || static_cast<int>(star.tets.size()) != n) continue;
      ++i;
      ++stars;
      double before = std::numeric_limits<double>::infinity();
      for (TetId t : star.tets) before = std::min(before, min_dihedral_angle(m.geom(t)));
      double best = -1.0;
      std::set<std::array<VertexId, 4>> best_set;
      for (const auto& tri : ring_triangulations(n)) {
        double q = std::numeric_limits<double>::infinity();
        std::set<std::array<VertexId, 4>> set;
        for (const auto& t : tri) {
          for (const Tet& cand : {Tet{star.ring[t[0]], star.ring[t[1]], star.ring[t[2]], e.b},
                                  Tet{star.ring[t[0]], star.ring[t[2]], star.ring[t[1]], e.a}}) {
            const TetGeom g{m.position(cand[0]), m.position(cand[1]), m.position(cand[2]), m.position(cand[3])};
            const double d = m.bbox_diagonal();
            if (!(signed_volume(g) > 1e-14 * d * d * d)) {
              q = -1.0;
              break;
            }
            q = std::min(q, min_dihedral_angle(g));
            Tet sorted = cand;
            std::sort(sorted.begin(), sorted.end());
            set.insert(sorted);
          }
          if (q < 0) break;
        }
        if (q > best) {
          best = q;
          best_set = set;
        }
      }
      const FlipProposal p = remove_edge_nm(m, e);
      const bool expect_apply = best > before;
      if (p.applied() != expect_apply) {
        ++mismatches;
      } else if (expect_apply) {
        ++applied;
        if (element_set(m) != best_set || p.min_dihedral_after != best) ++mismatches;
      }
    }
  }

  // empty circumspheres
  int delaunay_violations = 0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {20, 100, 300, 500}) {
    std::vector<Point3> pts;
    for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng), u(rng)});
    const TetMesh m = delaunay_points(pts, 8);
    for (TetId t : m.alive_tets()) {
      const Tet& q = m.tet(t);
      for (VertexId v = 0; v < n; ++v) {
        if (v == q[0] || v == q[1] || v == q[2] || v == q[3]) continue;
        delaunay_violations += predicates::insphere(m.position(q[0]), m.position(q[1]), m.position(q[2]),
                                                    m.position(q[3]), m.position(v)) > 0;
      }
    }
  }
  report(8, roundtrip && mismatches == 0 && delaunay_violations == 0, "oracle equivalence",
         fmt("flip23/flip32 round trip %s; edge removal matched brute force on %d/%d stars (%d applied); "
             "empty-circumsphere violations %d on 20..500-point sets",
             roundtrip ? "restores element set" : "FAILED", stars - mismatches, stars, applied, delaunay_violations));
}

void criterion9() {
  auto run_once = [] {
    PipelineConfig cfg = ball_config(0.2);
    cfg.seed = 7;
    const WsvmResult r = run_wsvm(DomainSpec{DomainShape::Ball, 1.0, 0.2}, cfg);
    std::ostringstream mesh;
    write_mesh(r.mesh, mesh, MeshFormat::Medit);
    return std::make_pair(mesh.str(), report_to_json(r.report, &r.trace));
  };
  const auto a = run_once();
  const auto b = run_once();
  report(9, a == b, "determinism",
         fmt("two ball t=0.2 runs (seed 7): mesh %zu bytes %s, report %zu bytes %s", a.first.size(),
             a.first == b.first ? "identical" : "DIFFER", a.second.size(), a.second == b.second ? "identical" : "DIFFER"));
}

void criterion10(const std::vector<std::pair<std::string, const RunTrace*>>& runs) {
  bool pass = true;
  std::string detail;
  for (const auto& [name, trace] : runs) {
    detail += name + ":";
    for (const StageResult& s : trace->stages) {
      pass &= s.converged && s.iterations <= 100;
      detail += fmt(" %d%s", s.iterations, s.converged ? "" : "(cap)");
    }
    detail += "; ";
  }
  detail += "outer iterations per stage, all converged by eps_theta within 100";
  report(10, pass, "convergence envelope", detail);
}

}  // namespace

int main() {
  std::printf("wsvm acceptance suite\n");
  std::fflush(stdout);
  criterion1();
  criterion2();
  criterion3();

  const DomainSpec ball{DomainShape::Ball, 1.0, 0.1};
  const TetMesh seed = ball_seed(ball);
  BallRuns runs;
  {
    const auto start = Clock::now();
    try {
      runs.full = run_wsvm(seed, ball_config(0.1));
    } catch (const Error& e) {
      runs.full_error = e.what();
    }
    runs.full_seconds = seconds_since(start);
  }
  criterion4(runs, seed);
  criterion5(runs);

  PipelineConfig angle_only = ball_config(0.1);
  angle_only.volume_stage = false;
  runs.angle_only = run_wsvm(seed, angle_only);
  PipelineConfig volume_only = ball_config(0.1);
  volume_only.angle_stage = false;
  runs.volume_only = run_wsvm(seed, volume_only);

  const WsvmResult coarse = run_wsvm(DomainSpec{DomainShape::Ball, 1.0, 0.3}, ball_config(0.3));
  const WsvmResult medium = run_wsvm(DomainSpec{DomainShape::Ball, 1.0, 0.2}, ball_config(0.2));
  criterion6({{0.3, &coarse.trace}, {0.2, &medium.trace}, {0.1, &runs.full.trace}});
  criterion7(runs);
  criterion8();
  criterion9();

  PipelineConfig cube_cfg = ball_config(0.2);
  const WsvmResult cube = run_wsvm(jittered_cube(5, 1.0, 0.2, 0.35), cube_cfg);
  PipelineConfig oct_cfg = ball_config(1.0);
  const WsvmResult oct = run_wsvm(octahedron_mesh(), oct_cfg);
  criterion10({{"ball t=0.3", &coarse.trace},
               {"ball t=0.2", &medium.trace},
               {"ball t=0.1", &runs.full.trace},
               {"ball t=0.1 angle-only", &runs.angle_only.trace},
               {"ball t=0.1 volume-only", &runs.volume_only.trace},
               {"jittered cube", &cube.trace},
               {"octahedron", &oct.trace}});

  std::printf("%s: %d of 10 criteria failed\n", g_failures ? "FAIL" : "PASS", g_failures);
  return g_failures == 0 ? 0 : 1;
}
