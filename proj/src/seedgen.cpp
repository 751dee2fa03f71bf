#include "wsvm/seedgen.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>
#include <unordered_map>

#include "wsvm/error.hpp"
#include "wsvm/predicates.hpp"

namespace wsvm {

namespace {

using predicates::insphere_perturbed;
using predicates::orient3d;

bool collinear_exact(const Point3& a, const Point3& b, const Point3& c) {
  const mpq_class ux = mpq_class(b.x) - a.x, uy = mpq_class(b.y) - a.y, uz = mpq_class(b.z) - a.z;
  const mpq_class vx = mpq_class(c.x) - a.x, vy = mpq_class(c.y) - a.y, vz = mpq_class(c.z) - a.z;
  return uy * vz - uz * vy == 0 && uz * vx - ux * vz == 0 && ux * vy - uy * vx == 0;
}

// Incremental Delaunay with an explicit vertex at infinity: every hull face
// carries a "ghost" tet whose fourth vertex is the sentinel id n.
class BowyerWatson {
 public:
  explicit BowyerWatson(std::span<const Point3> points) : pts_(points), inf_(static_cast<int>(points.size())) {}

  void run(std::vector<int> order) {
    make_first_tet(order);
    for (std::size_t i = 4; i < order.size(); ++i) insert(order[i]);
  }

  std::vector<Tet> solid_tets() const {
    std::vector<Tet> out;
    for (std::size_t t = 0; t < tets_.size(); ++t) {
      if (alive_[t] && !is_ghost(static_cast<int>(t))) out.push_back(tets_[t]);
    }
    return out;
  }

 private:
  bool is_ghost(int t) const {
    const auto& v = tets_[t];
    return v[0] == inf_ || v[1] == inf_ || v[2] == inf_ || v[3] == inf_;
  }

  const Point3& pt(int v) const { return pts_[v]; }

  int orient_with(const Tet& tet, int slot, int p) const {
    std::array<const Point3*, 4> q;
    for (int k = 0; k < 4; ++k) q[k] = k == slot ? &pt(p) : &pt(tet[k]);
    return orient3d(*q[0], *q[1], *q[2], *q[3]);
  }

  int allocate(const Tet& tet) {
    int id;
    if (!free_.empty()) {
      id = free_.back();
      free_.pop_back();
    } else {
      id = static_cast<int>(tets_.size());
      tets_.push_back({});
      nbr_.push_back({});
      alive_.push_back(0);
      state_.push_back(0);
      in_cavity_.push_back(0);
    }
    tets_[id] = tet;
    nbr_[id] = {-1, -1, -1, -1};
    alive_[id] = 1;
    state_[id] = 0;
    in_cavity_[id] = 0;
    return id;
  }

  void make_first_tet(std::vector<int>& order) {
    std::size_t i1 = 1;
    std::size_t i2 = 2;
    while (i2 < order.size() && collinear_exact(pt(order[0]), pt(order[i1]), pt(order[i2]))) ++i2;
    if (i2 >= order.size()) throw Error(ErrorCode::DegenerateInput, "all points are collinear");
    std::swap(order[2], order[i2]);
    std::size_t i3 = 3;
    while (i3 < order.size() && orient3d(pt(order[0]), pt(order[1]), pt(order[2]), pt(order[i3])) == 0) ++i3;
    if (i3 >= order.size()) throw Error(ErrorCode::DegenerateInput, "all points are coplanar");
    std::swap(order[3], order[i3]);

    Tet first = {order[0], order[1], order[2], order[3]};
    if (orient3d(pt(first[0]), pt(first[1]), pt(first[2]), pt(first[3])) < 0) std::swap(first[2], first[3]);
    const int t0 = allocate(first);
    std::array<int, 4> ghosts{};
    for (int k = 0; k < 4; ++k) {
      const auto& f = kTetFaces[k];
      ghosts[k] = allocate({first[f[0]], first[f[1]], first[f[2]], inf_});
      nbr_[t0][k] = ghosts[k];
      nbr_[ghosts[k]][3] = t0;
    }
    // ghost-ghost adjacency across faces containing the infinite vertex
    link_new_faces(ghosts);
    last_ = t0;
  }

  // Matches the faces of `created` that are not yet linked, by their vertex sets.
  void link_new_faces(std::span<const int> created) {
    std::unordered_map<std::uint64_t, std::pair<int, int>> open;
    auto key_of = [&](int t, int k) {
      std::array<int, 3> v;
      int n = 0;
      for (int j = 0; j < 4; ++j) {
        if (j != k) v[n++] = tets_[t][j];
      }
      std::sort(v.begin(), v.end());
      const auto m = static_cast<std::uint64_t>(inf_) + 1;
      return (static_cast<std::uint64_t>(v[0]) * m + v[1]) * m + v[2];
    };
    for (int t : created) {
      for (int k = 0; k < 4; ++k) {
        if (nbr_[t][k] != -1) continue;
        const auto key = key_of(t, k);
        auto it = open.find(key);
        if (it == open.end()) {
          open.emplace(key, std::make_pair(t, k));
        } else {
          nbr_[t][k] = it->second.first;
          nbr_[it->second.first][it->second.second] = t;
          open.erase(it);
        }
      }
    }
    if (!open.empty()) throw Error(ErrorCode::DegenerateInput, "Delaunay cavity left unmatched faces");
  }

  bool conflicts(int t, int p) {
    if (state_[t]) return state_[t] == 1;
    bool c = false;
    const Tet& tet = tets_[t];
    int inf_slot = -1;
    for (int k = 0; k < 4; ++k) {
      if (tet[k] == inf_) inf_slot = k;
    }
    if (inf_slot >= 0) {
      const int o = orient_with(tet, inf_slot, p);
      c = o > 0 || (o == 0 && conflicts(nbr_[t][inf_slot], p));
    } else {
      c = insphere_perturbed(pt(tet[0]), pt(tet[1]), pt(tet[2]), pt(tet[3]), pt(p)) > 0;
    }
    state_[t] = c ? 1 : 2;
    touched_.push_back(t);
    return c;
  }

  int locate(int p) {
    int cur = last_;
    const std::size_t cap = 4 * tets_.size() + 16;
    for (std::size_t step = 0; step < cap; ++step) {
      const int start = static_cast<int>(walk_rng_() & 3u);
      int next = -1;
      for (int i = 0; i < 4; ++i) {
        const int k = (start + i) & 3;
        if (orient_with(tets_[cur], k, p) < 0) {
          next = nbr_[cur][k];
          break;
        }
      }
      if (next == -1) return cur;
      if (is_ghost(next)) return next;
      cur = next;
    }
    // walk failed to terminate; scan
    for (std::size_t t = 0; t < tets_.size(); ++t) {
      if (alive_[t] && conflicts(static_cast<int>(t), p)) return static_cast<int>(t);
    }
    throw Error(ErrorCode::DegenerateInput, "point location failed");
  }

  void insert(int p) {
    const int start = locate(p);
    std::vector<int> cavity = {start};
    in_cavity_[start] = 1;
    state_[start] = 1;
    touched_.push_back(start);
    struct Horizon {
      int cell;
      int slot;
    };
    std::vector<Horizon> horizon;
    for (std::size_t i = 0; i < cavity.size(); ++i) {
      const int c = cavity[i];
      for (int k = 0; k < 4; ++k) {
        const int n = nbr_[c][k];
        if (in_cavity_[n]) continue;
        if (conflicts(n, p)) {
          in_cavity_[n] = 1;
          cavity.push_back(n);
        } else {
          horizon.push_back({c, k});
        }
      }
    }

    struct Pending {
      Tet tet;
      int slot;
      int outside;
      int outside_slot;
    };
    std::vector<Pending> pending;
    pending.reserve(horizon.size());
    for (const Horizon& h : horizon) {
      Tet nt = tets_[h.cell];
      nt[h.slot] = p;
      if (nt[0] != inf_ && nt[1] != inf_ && nt[2] != inf_ && nt[3] != inf_ &&
          orient3d(pt(nt[0]), pt(nt[1]), pt(nt[2]), pt(nt[3])) <= 0) {
        throw Error(ErrorCode::DegenerateInput, "Delaunay insertion produced a flat tet");
      }
      const int outside = nbr_[h.cell][h.slot];
      int outside_slot = 0;
      while (nbr_[outside][outside_slot] != h.cell) ++outside_slot;
      pending.push_back({nt, h.slot, outside, outside_slot});
    }
    for (int c : cavity) {
      alive_[c] = 0;
      in_cavity_[c] = 0;
      free_.push_back(c);
    }
    for (int t : touched_) state_[t] = 0;
    touched_.clear();

    std::vector<int> created;
    created.reserve(pending.size());
    for (const Pending& q : pending) {
      const int id = allocate(q.tet);
      nbr_[id][q.slot] = q.outside;
      nbr_[q.outside][q.outside_slot] = id;
      created.push_back(id);
    }
    link_new_faces(created);
    for (int t : created) {
      if (!is_ghost(t)) {
        last_ = t;
        break;
      }
    }
  }

  std::span<const Point3> pts_;
  int inf_;
  std::vector<Tet> tets_;
  std::vector<std::array<int, 4>> nbr_;
  std::vector<std::uint8_t> alive_;
  std::vector<std::uint8_t> state_;  // 0 unknown, 1 conflict, 2 clear
  std::vector<std::uint8_t> in_cavity_;
  std::vector<int> touched_;
  std::vector<int> free_;
  int last_ = 0;
  std::minstd_rand walk_rng_{12345};
};

// Fisher-Yates on raw engine output, independent of the standard library's
// distribution implementations.
std::vector<int> shuffled_order(std::size_t n, std::uint64_t seed) {
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

}  // namespace

void DomainSpec::check() const {
  if (!(size > 0.0) || !std::isfinite(size)) throw Error(ErrorCode::InvalidDomain, "domain size must be positive");
  const double diameter = shape == DomainShape::Ball ? 2.0 * size : std::sqrt(3.0) * size;
  if (!(target_edge > 0.0) || !(target_edge < diameter)) {
    throw Error(ErrorCode::InvalidDomain, "target edge must be in (0, domain diameter)");
  }
}

TetMesh cube_seed(const DomainSpec& spec) {
  spec.check();
  const int n = static_cast<int>(std::lround(spec.size / spec.target_edge));
  if (n < 2) throw Error(ErrorCode::ResolutionTooCoarse, "cube seed needs at least 2 cells per side");
  const double h = spec.size / n;
  const int m = n + 1;
  std::vector<Point3> verts;
  verts.reserve(static_cast<std::size_t>(m) * m * m);
  auto id = [m](int i, int j, int k) { return static_cast<VertexId>((k * m + j) * m + i); };
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) verts.push_back({i * h, j * h, k * h});
    }
  }
  // Kuhn subdivision: one tet per axis ordering along the main diagonal
  constexpr std::array<std::array<int, 3>, 6> kPerms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<Tet> tets;
  tets.reserve(static_cast<std::size_t>(n) * n * n * 6);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        for (const auto& perm : kPerms) {
          std::array<int, 3> c = {i, j, k};
          Tet t{};
          t[0] = id(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[perm[s]];
            t[s + 1] = id(c[0], c[1], c[2]);
          }
          tets.push_back(t);
        }
      }
    }
  }
  return TetMesh(std::move(verts), std::move(tets));
}

TetMesh delaunay_points(std::span<const Point3> points, std::uint64_t seed) {
  if (points.size() < 4) throw Error(ErrorCode::DegenerateInput, "need at least 4 points");
  for (const Point3& p : points) {
    if (!is_finite(p)) throw Error(ErrorCode::DegenerateInput, "non-finite point");
  }
  std::vector<int> sorted(points.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i] = static_cast<int>(i);
  std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
    return std::tie(points[a].x, points[a].y, points[a].z) < std::tie(points[b].x, points[b].y, points[b].z);
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (points[sorted[i]] == points[sorted[i - 1]]) {
      throw Error(ErrorCode::DuplicatePoints, "point " + std::to_string(sorted[i]) + " duplicates point " +
                                                  std::to_string(sorted[i - 1]));
    }
  }
  BowyerWatson bw(points);
  bw.run(shuffled_order(points.size(), seed));
  return TetMesh(std::vector<Point3>(points.begin(), points.end()), bw.solid_tets());
}

std::vector<Point3> ball_points(const DomainSpec& spec) {
  spec.check();
  const double r = spec.size;
  const double t = spec.target_edge;
  std::vector<Point3> pts;
  // Fibonacci sphere: one sample per equilateral-triangle vertex area
  const auto n_surface = static_cast<int>(
      std::max(12.0, std::round(4.0 * std::numbers::pi * r * r / (std::sqrt(3.0) / 2.0 * t * t))));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n_surface; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n_surface;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    Point3 p{rho * std::cos(phi), rho * std::sin(phi), z};
    pts.push_back(r / norm(p) * p);
  }
  // BCC lattice: nearest neighbors at distance t, cube edge 2t/sqrt(3)
  const double h = 2.0 * t / std::sqrt(3.0);
  const double inner = r - 0.6 * t;
  const int n = static_cast<int>(std::ceil(r / h)) + 1;
  for (int k = -n; k <= n; ++k) {
    for (int j = -n; j <= n; ++j) {
      for (int i = -n; i <= n; ++i) {
        for (int c = 0; c < 2; ++c) {
          const double off = c * 0.5 * h;
          const Point3 p{i * h + off, j * h + off, k * h + off};
          if (norm(p) < inner) pts.push_back(p);
        }
      }
    }
  }
  return pts;
}

TetMesh ball_seed(const DomainSpec& spec, std::uint64_t seed) {
  const std::vector<Point3> pts = ball_points(spec);
  return delaunay_points(pts, seed);
}

TetMesh seed_mesh(const DomainSpec& spec, std::uint64_t seed) {
  return spec.shape == DomainShape::Cube ? cube_seed(spec) : ball_seed(spec, seed);
}

}  // namespace wsvm
