#pragma once

#include "wsvm/point3.hpp"

namespace wsvm::predicates {

/// Sign of det[b-a, c-a, d-a]: +1 when (a,b,c,d) is positively oriented.
/// Floating-point evaluation with a static error bound, falling back to exact
/// rational arithmetic when the sign is uncertain.
int orient3d(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

/// For positively oriented (a,b,c,d): +1 if e is strictly inside their
/// circumsphere, -1 if strictly outside, 0 if on it. Exact.
int insphere(const Point3& a, const Point3& b, const Point3& c, const Point3& d, const Point3& e);

/// insphere with ties broken by symbolic perturbation (lexicographic point
/// order); never returns 0 for distinct, non-coplanar a,b,c,d.
int insphere_perturbed(const Point3& a, const Point3& b, const Point3& c, const Point3& d, const Point3& e);

/// Number of times the exact fallback ran since program start.
long exact_fallback_count();

}  // namespace wsvm::predicates
