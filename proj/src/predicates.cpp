#include "wsvm/predicates.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <tuple>

namespace wsvm::predicates {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
constexpr double kOrientBound = (7.0 + 56.0 * kEpsilon) * kEpsilon;
constexpr double kInsphereBound = (16.0 + 224.0 * kEpsilon) * kEpsilon;

std::atomic<long> g_exact_calls{0};

int sign_of(const mpq_class& q) { return sgn(q); }

int sign_of(double d) { return (d > 0.0) - (d < 0.0); }

// det[a-d, b-d, c-d]
int orient_exact(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  ++g_exact_calls;
  const mpq_class adx = mpq_class(a.x) - d.x, ady = mpq_class(a.y) - d.y, adz = mpq_class(a.z) - d.z;
  const mpq_class bdx = mpq_class(b.x) - d.x, bdy = mpq_class(b.y) - d.y, bdz = mpq_class(b.z) - d.z;
  const mpq_class cdx = mpq_class(c.x) - d.x, cdy = mpq_class(c.y) - d.y, cdz = mpq_class(c.z) - d.z;
  const mpq_class det =
      adz * (bdx * cdy - cdx * bdy) + bdz * (cdx * ady - adx * cdy) + cdz * (adx * bdy - bdx * ady);
  return sign_of(det);
}

// Shewchuk's orientation: positive when d lies below the plane of a,b,c,
// i.e. det[a-d, b-d, c-d].
int orient_below(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  const double adx = a.x - d.x, ady = a.y - d.y, adz = a.z - d.z;
  const double bdx = b.x - d.x, bdy = b.y - d.y, bdz = b.z - d.z;
  const double cdx = c.x - d.x, cdy = c.y - d.y, cdz = c.z - d.z;
  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(adz) +
                           (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bdz) +
                           (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cdz);
  if (std::abs(det) > kOrientBound * permanent) return sign_of(det);
  return orient_exact(a, b, c, d);
}

int insphere_exact(const Point3& pa, const Point3& pb, const Point3& pc, const Point3& pd, const Point3& pe) {
  ++g_exact_calls;
  auto rel = [&](const Point3& p) {
    return std::array<mpq_class, 3>{mpq_class(p.x) - pe.x, mpq_class(p.y) - pe.y, mpq_class(p.z) - pe.z};
  };
  const auto a = rel(pa), b = rel(pb), c = rel(pc), d = rel(pd);
  const mpq_class ab = a[0] * b[1] - b[0] * a[1];
  const mpq_class bc = b[0] * c[1] - c[0] * b[1];
  const mpq_class cd = c[0] * d[1] - d[0] * c[1];
  const mpq_class da = d[0] * a[1] - a[0] * d[1];
  const mpq_class ac = a[0] * c[1] - c[0] * a[1];
  const mpq_class bd = b[0] * d[1] - d[0] * b[1];
  const mpq_class abc = a[2] * bc - b[2] * ac + c[2] * ab;
  const mpq_class bcd = b[2] * cd - c[2] * bd + d[2] * bc;
  const mpq_class cda = c[2] * da + d[2] * ac + a[2] * cd;
  const mpq_class dab = d[2] * ab + a[2] * bd + b[2] * da;
  auto lift = [](const std::array<mpq_class, 3>& p) -> mpq_class { return p[0] * p[0] + p[1] * p[1] + p[2] * p[2]; };
  const mpq_class det = (lift(d) * abc - lift(c) * dab) + (lift(b) * cda - lift(a) * bcd);
  return sign_of(det);
}

// Shewchuk's insphere: positive when pe is inside the sphere through
// pa..pd, given orient_below(pa,pb,pc,pd) > 0.
int insphere_shewchuk(const Point3& pa, const Point3& pb, const Point3& pc, const Point3& pd, const Point3& pe) {
  const double aex = pa.x - pe.x, aey = pa.y - pe.y, aez = pa.z - pe.z;
  const double bex = pb.x - pe.x, bey = pb.y - pe.y, bez = pb.z - pe.z;
  const double cex = pc.x - pe.x, cey = pc.y - pe.y, cez = pc.z - pe.z;
  const double dex = pd.x - pe.x, dey = pd.y - pe.y, dez = pd.z - pe.z;

  const double aexbey = aex * bey, bexaey = bex * aey;
  const double bexcey = bex * cey, cexbey = cex * bey;
  const double cexdey = cex * dey, dexcey = dex * cey;
  const double dexaey = dex * aey, aexdey = aex * dey;
  const double aexcey = aex * cey, cexaey = cex * aey;
  const double bexdey = bex * dey, dexbey = dex * bey;
  const double ab = aexbey - bexaey;
  const double bc = bexcey - cexbey;
  const double cd = cexdey - dexcey;
  const double da = dexaey - aexdey;
  const double ac = aexcey - cexaey;
  const double bd = bexdey - dexbey;

  const double abc = aez * bc - bez * ac + cez * ab;
  const double bcd = bez * cd - cez * bd + dez * bc;
  const double cda = cez * da + dez * ac + aez * cd;
  const double dab = dez * ab + aez * bd + bez * da;

  const double alift = aex * aex + aey * aey + aez * aez;
  const double blift = bex * bex + bey * bey + bez * bez;
  const double clift = cex * cex + cey * cey + cez * cez;
  const double dlift = dex * dex + dey * dey + dez * dez;

  const double det = (dlift * abc - clift * dab) + (blift * cda - alift * bcd);

  const double aezp = std::abs(aez), bezp = std::abs(bez), cezp = std::abs(cez), dezp = std::abs(dez);
  const double permanent =
      ((std::abs(cexdey) + std::abs(dexcey)) * bezp + (std::abs(dexbey) + std::abs(bexdey)) * cezp +
       (std::abs(bexcey) + std::abs(cexbey)) * dezp) * alift +
      ((std::abs(dexaey) + std::abs(aexdey)) * cezp + (std::abs(aexcey) + std::abs(cexaey)) * dezp +
       (std::abs(cexdey) + std::abs(dexcey)) * aezp) * blift +
      ((std::abs(aexbey) + std::abs(bexaey)) * dezp + (std::abs(bexdey) + std::abs(dexbey)) * aezp +
       (std::abs(dexaey) + std::abs(aexdey)) * bezp) * clift +
      ((std::abs(bexcey) + std::abs(cexbey)) * aezp + (std::abs(cexaey) + std::abs(aexcey)) * bezp +
       (std::abs(aexbey) + std::abs(bexaey)) * cezp) * dlift;
  if (std::abs(det) > kInsphereBound * permanent) return sign_of(det);
  return insphere_exact(pa, pb, pc, pd, pe);
}

bool lex_less(const Point3& p, const Point3& q) { return std::tie(p.x, p.y, p.z) < std::tie(q.x, q.y, q.z); }

}  // namespace

int orient3d(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  // det[b-a, c-a, d-a] = -det[a-d, b-d, c-d]
  return -orient_below(a, b, c, d);
}

int insphere(const Point3& a, const Point3& b, const Point3& c, const Point3& d, const Point3& e) {
  // positively oriented here means orient_below(a,b,c,d) < 0, which flips
  // the sign of Shewchuk's determinant
  return -insphere_shewchuk(a, b, c, d, e);
}

int insphere_perturbed(const Point3& a, const Point3& b, const Point3& c, const Point3& d, const Point3& e) {
  if (const int s = insphere(a, b, c, d, e); s != 0) return s;
  std::array<const Point3*, 5> pts = {&a, &b, &c, &d, &e};
  std::sort(pts.begin(), pts.end(), [](const Point3* p, const Point3* q) { return lex_less(*p, *q); });
  // Walk the perturbation monomials from the lexicographically largest point.
  for (int i = 4; i > 1; --i) {
    if (pts[i] == &e) return -1;
    int o = 0;
    if (pts[i] == &d && (o = orient3d(a, b, c, e)) != 0) return o;
    if (pts[i] == &c && (o = orient3d(a, b, e, d)) != 0) return o;
    if (pts[i] == &b && (o = orient3d(a, e, c, d)) != 0) return o;
    if (pts[i] == &a && (o = orient3d(e, b, c, d)) != 0) return o;
  }
  return -1;
}

long exact_fallback_count() { return g_exact_calls.load(); }

}  // namespace wsvm::predicates
