#pragma once

// Local dependence i(u,v) = d^2 log c / du dv and relative local dependence
// r(u,v) = i(u,v) / c(u,v). Closed forms per family where available, the
// generic Archimedean generator route, the exponent-form route, diagonal
// profiles, tail rates, and the margin-invariance check.

#include <cmath>
#include <functional>
#include <vector>

#include "cld/copula.hpp"
#include "cld/finite_diff.hpp"
#include "cld/normal.hpp"

namespace cld {

// r on an Archimedean copula from its generator:
// r = (1/psi'') (log psi'')'' = (psi'''' psi'' - psi'''^2) / psi''^3
// evaluated at t = psi^-1(u) + psi^-1(v).
inline double archimedean_r_from_generator(const GeneratorBundle& b, double u, double v) {
  const double t = b.psi_inverse(u) + b.psi_inverse(v);
  const double p2 = b.psi_deriv(2, t);
  if (p2 == 0.0) throw UndefinedValueError("archimedean_r_from_generator: psi'' vanishes");
  const double p3 = b.psi_deriv(3, t);
  const double p4 = b.psi_deriv(4, t);
  return (p4 * p2 - p3 * p3) / (p2 * p2 * p2);
}

// i on an Archimedean copula from its generator:
// i = (log psi'')''(t) / (psi'(psi^-1(u)) psi'(psi^-1(v))).
inline double archimedean_i_from_generator(const GeneratorBundle& b, double u, double v) {
  const double tu = b.psi_inverse(u), tv = b.psi_inverse(v);
  const double t = tu + tv;
  const double p2 = b.psi_deriv(2, t);
  if (p2 == 0.0) throw UndefinedValueError("archimedean_i_from_generator: psi'' vanishes");
  const double log_dd = (b.psi_deriv(4, t) * p2 - b.psi_deriv(3, t) * b.psi_deriv(3, t)) /
                        (p2 * p2);
  return log_dd / (b.psi_deriv(1, tu) * b.psi_deriv(1, tv));
}

// Same quantity through the exponent form psi = exp(A): a rational
// expression in A'..A'''' divided by (A'' + A'^2)^3, times 1/C(u,v).
inline double exponent_form_r(const GeneratorBundle& b, double u, double v) {
  const double t = b.psi_inverse(u) + b.psi_inverse(v);
  const double a1 = b.a_deriv[0](t);
  const double a2 = b.a_deriv[1](t);
  const double a3 = b.a_deriv[2](t);
  const double a4 = b.a_deriv[3](t);
  const double base = a2 + a1 * a1;
  if (base == 0.0) throw UndefinedValueError("exponent_form_r: (A'' + A'^2)^3 vanishes");
  const double num = a4 * a2 + a4 * a1 * a1 + a1 * a1 * a1 * a1 * a2 +
                     3.0 * a2 * a2 * a2 + 2.0 * a1 * a1 * a1 * a3 -
                     2.0 * a1 * a2 * a3 - a3 * a3;
  return num / (base * base * base) / b.psi(t);
}

namespace detail {
inline void require_interior(double u, double v, const char* who) {
  if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0))
    throw DomainError(std::string(who) + ": point must be interior to (0,1)^2");
}
}  // namespace detail

// Analytic local dependence. Families with no simple closed form for i
// (Gumbel-Hougaard, Ali-Mikhail-Haq) go through the generator route.
inline double local_dependence(const CopulaModel& m, double u, double v) {
  detail::require_interior(u, v, "local_dependence");
  const double t = m.parameter();
  switch (m.family()) {
    case Family::independence: return 0.0;
    case Family::frank: return 2.0 * t * pdf(m, u, v);
    case Family::clayton:
      return (t * (1.0 + 2.0 * t) / (1.0 + t)) * pdf(m, u, v) / cdf(m, u, v);
    case Family::fgm: {
      const double c = pdf(m, u, v);
      return 4.0 * t / (c * c);
    }
    case Family::gaussian: {
      const double x = normal_quantile(u), y = normal_quantile(v);
      return t / ((1.0 - t * t) * normal_pdf(x) * normal_pdf(y));
    }
    case Family::mics: return t;
    case Family::gumbel_hougaard:
    case Family::ali_mikhail_haq:
      return archimedean_i_from_generator(generator(m), u, v);
  }
  throw UnsupportedFamilyError("local_dependence: unknown family");
}

// Family-agnostic numeric route via the log-density stencil. For the
// cell-constant mics density the step snaps to one cell width, which makes
// the stencil read the exact discrete log odds.
inline double local_dependence_numeric(const CopulaModel& m, double u, double v,
                                       double h = 1e-4) {
  detail::require_interior(u, v, "local_dependence_numeric");
  if (m.family() == Family::mics) h = 1.0 / m.mics_table().n;
  h = interior_step(u, v, h);
  return mixed_partial_log([&](double a, double b) { return pdf(m, a, b); }, u, v, h);
}

// Analytic relative local dependence r = i / c. Closed forms reduce further
// for Frank (constant 2 theta), Clayton (const / C), FGM (4 theta c^-3),
// and the exponential-bilinear family (theta / c).
inline double relative_local_dependence(const CopulaModel& m, double u, double v) {
  const double t = m.parameter();
  switch (m.family()) {
    case Family::independence: return 0.0;
    case Family::frank: return 2.0 * t;
    case Family::clayton: {
      const double C = cdf(m, u, v);
      if (C == 0.0) throw UndefinedValueError("relative_local_dependence: zero cdf");
      return (t * (1.0 + 2.0 * t) / (1.0 + t)) / C;
    }
    case Family::fgm: {
      const double c = pdf(m, u, v);
      if (c == 0.0) throw UndefinedValueError("relative_local_dependence: zero density");
      return 4.0 * t / (c * c * c);
    }
    case Family::gaussian: {
      detail::require_interior(u, v, "relative_local_dependence");
      return local_dependence(m, u, v) / pdf(m, u, v);
    }
    case Family::mics: {
      const double c = pdf(m, u, v);
      if (c == 0.0) throw UndefinedValueError("relative_local_dependence: zero density");
      return t / c;
    }
    case Family::gumbel_hougaard:
    case Family::ali_mikhail_haq:
      return archimedean_r_from_generator(generator(m), u, v);
  }
  throw UnsupportedFamilyError("relative_local_dependence: unknown family");
}

inline double relative_local_dependence_numeric(const CopulaModel& m, double u, double v,
                                                double h = 1e-4) {
  const double c = pdf(m, u, v);
  if (c <= 0.0) throw UndefinedValueError("relative_local_dependence_numeric: zero density");
  return local_dependence_numeric(m, u, v, h) / c;
}

enum class ProfileKind { local, relative };

struct DiagonalProfile {
  std::vector<double> coordinates;
  std::vector<double> values;
  ProfileKind kind = ProfileKind::relative;
};

inline DiagonalProfile diagonal_profile(const CopulaModel& m, ProfileKind kind,
                                        const std::vector<double>& grid) {
  DiagonalProfile p;
  p.kind = kind;
  p.coordinates = grid;
  p.values.reserve(grid.size());
  for (double u : grid)
    p.values.push_back(kind == ProfileKind::local ? local_dependence(m, u, u)
                                                  : relative_local_dependence(m, u, u));
  return p;
}

struct TailRate {
  std::vector<double> u;       // evaluated diagonal coordinates
  std::vector<double> value;   // r(u,u)
  double slope = 0.0;          // log-log least squares over the last points
  double constant = 0.0;       // u * r(u,u) at the smallest usable u
  bool truncated = false;      // sequence cut short by numeric breakdown
};

inline std::vector<double> dyadic_sequence(int first = 3, int last = 14) {
  std::vector<double> s;
  for (int k = first; k <= last; ++k) s.push_back(std::ldexp(1.0, -k));
  return s;
}

// Diagonal decay rate of r(u,u) as u -> 0: least-squares slope of
// log r against log u over the last `fit_points` entries.
inline TailRate tail_rate(const CopulaModel& m, std::vector<double> us = dyadic_sequence(),
                          int fit_points = 6) {
  TailRate out;
  for (double u : us) {
    double r;
    try {
      r = relative_local_dependence(m, u, u);
    } catch (const std::exception&) {
      out.truncated = true;
      break;
    }
    if (!std::isfinite(r)) {
      out.truncated = true;
      break;
    }
    out.u.push_back(u);
    out.value.push_back(r);
  }
  if (out.u.empty()) throw UndefinedValueError("tail_rate: no usable points");
  const int n = static_cast<int>(out.u.size());
  const int k0 = std::max(0, n - fit_points);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int k = k0; k < n; ++k) {
    const double x = std::log(out.u[k]);
    const double y = std::log(std::abs(out.value[k]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  out.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  out.constant = out.u.back() * out.value.back();
  return out;
}

struct TailDependence {
  std::vector<double> u;
  std::vector<double> ratio;  // C(u,u)/u
  double lambda = 0.0;        // value at the smallest usable u
  bool truncated = false;
};

inline TailDependence lower_tail_dependence(const CopulaModel& m,
                                            std::vector<double> us = dyadic_sequence()) {
  TailDependence out;
  for (double u : us) {
    double c;
    try {
      c = cdf(m, u, u);
    } catch (const std::exception&) {
      out.truncated = true;
      break;
    }
    if (!std::isfinite(c)) {
      out.truncated = true;
      break;
    }
    out.u.push_back(u);
    out.ratio.push_back(c / u);
  }
  if (out.u.empty()) throw UndefinedValueError("lower_tail_dependence: no usable points");
  out.lambda = out.ratio.back();
  return out;
}

// Strictly increasing margin transform: cdf G, quantile G^-1, density g.
struct MarginTransform {
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
  std::function<double(double)> density;
};

inline MarginTransform identity_margin() {
  return {[](double x) { return x; }, [](double p) { return p; },
          [](double) { return 1.0; }};
}

inline MarginTransform normal_margin() {
  return {[](double x) { return normal_cdf(x); },
          [](double p) { return normal_quantile(p); },
          [](double x) { return normal_pdf(x); }};
}

// Builds the pushed-forward joint density f(x,y) = g1(x) g2(y) c(G1 x, G2 y),
// evaluates its relative local dependence numerically at the pre-images of
// the grid, and reports the worst relative discrepancy against r on the
// copula scale.
inline double invariance_max_discrepancy(const CopulaModel& m, const MarginTransform& g1,
                                         const MarginTransform& g2,
                                         const std::vector<double>& grid,
                                         double h = 1e-4) {
  auto f = [&](double x, double y) {
    return g1.density(x) * g2.density(y) * pdf(m, g1.cdf(x), g2.cdf(y));
  };
  double worst = 0.0;
  for (double u : grid) {
    for (double v : grid) {
      const double x = g1.quantile(u), y = g2.quantile(v);
      const double i_f = mixed_partial_log_free(f, x, y, h);
      const double r_f = i_f / f(x, y);
      const double r_c = relative_local_dependence(m, u, v);
      const double scale = std::max(std::abs(r_c), 1e-12);
      worst = std::max(worst, std::abs(r_f - r_c) / scale);
    }
  }
  return worst;
}

}  // namespace cld
