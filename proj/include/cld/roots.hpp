#pragma once

// Scalar root finding: real quadratic roots and bracketing bisection for
// monotone functions.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cld/errors.hpp"

namespace cld {

// All real roots of a*x^2 + b*x + c = 0, sorted ascending. Linear fallback
// when a == 0; empty set when the discriminant is negative.
inline std::vector<double> solve_quadratic(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) throw std::invalid_argument("solve_quadratic: a and b are both zero");
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-b / (2.0 * a)};
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
  double r1 = q / a;
  double r2 = (q != 0.0) ? c / q : -b / a - r1;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

// Bisection solve of F(x) = target for nondecreasing F on [lo, hi].
// Returns x with |F(x) - target| <= tol.
inline double invert_monotone(const std::function<double(double)>& f, double target,
                              double tol = 1e-10, double lo = 0.0, double hi = 1.0) {
  double flo = f(lo);
  double fhi = f(hi);
  if (target < flo - tol || target > fhi + tol)
    throw DomainError("invert_monotone: target outside the function's range");
  if (target <= flo) return lo;
  if (target >= fhi) return hi;
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm - target) <= tol) return mid;
    if (fm < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-16) break;
  }
  return mid;
}

}  // namespace cld
