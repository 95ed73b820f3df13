#pragma once

// Central finite differences for mixed second derivatives.

#include <cmath>
#include <functional>

#include "cld/errors.hpp"

namespace cld {

// d^2/du dv log f at (u,v) by the 4-point central stencil; O(h^2) accurate.
// Requires the stencil {u-h, u+h} x {v-h, v+h} inside (0,1)^2 and f > 0 there.
template <typename F>
double mixed_partial_log(F&& f, double u, double v, double h) {
  if (!(h > 0.0)) throw DomainError("mixed_partial_log: h must be positive");
  if (u - h <= 0.0 || u + h >= 1.0 || v - h <= 0.0 || v + h >= 1.0)
    throw DomainError("mixed_partial_log: stencil leaves (0,1)^2");
  const double fpp = f(u + h, v + h);
  const double fpm = f(u + h, v - h);
  const double fmp = f(u - h, v + h);
  const double fmm = f(u - h, v - h);
  if (!(fpp > 0.0 && fpm > 0.0 && fmp > 0.0 && fmm > 0.0))
    throw DomainError("mixed_partial_log: nonpositive function value on the stencil");
  return (std::log(fpp) - std::log(fpm) - std::log(fmp) + std::log(fmm)) / (4.0 * h * h);
}

// The same stencil without the unit-square restriction, for densities on
// arbitrary domains (still requires positivity on the stencil).
template <typename F>
double mixed_partial_log_free(F&& f, double x, double y, double h) {
  if (!(h > 0.0)) throw DomainError("mixed_partial_log_free: h must be positive");
  const double fpp = f(x + h, y + h);
  const double fpm = f(x + h, y - h);
  const double fmp = f(x - h, y + h);
  const double fmm = f(x - h, y - h);
  if (!(fpp > 0.0 && fpm > 0.0 && fmp > 0.0 && fmm > 0.0))
    throw DomainError("mixed_partial_log_free: nonpositive function value on the stencil");
  return (std::log(fpp) - std::log(fpm) - std::log(fmp) + std::log(fmm)) / (4.0 * h * h);
}

// Same stencil applied to f itself: approximates d^2 f / du dv.
template <typename F>
double mixed_partial(F&& f, double u, double v, double h) {
  if (!(h > 0.0)) throw DomainError("mixed_partial: h must be positive");
  return (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) /
         (4.0 * h * h);
}

// Shrinks a step so the stencil around (u,v) stays inside (0,1)^2.
inline double interior_step(double u, double v, double h) {
  const double margin = 0.5 * std::min(std::min(u, 1.0 - u), std::min(v, 1.0 - v));
  return std::min(h, margin);
}

}  // namespace cld
