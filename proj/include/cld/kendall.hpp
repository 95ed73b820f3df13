#pragma once

// Global and local Kendall's tau: the lower-corner version normalized by
// C(p,q)^2, the rectangular version with squared and cubed normalizers, a
// 4D sign-integral oracle, and the diagonal limit with diagnostics.

#include <cmath>
#include <vector>

#include "cld/copula.hpp"
#include "cld/errors.hpp"
#include "cld/quadrature.hpp"

namespace cld {

struct RectRegion {
  double p1 = 0.0, p2 = 1.0, q1 = 0.0, q2 = 1.0;
  RectRegion() = default;
  RectRegion(double p1_, double p2_, double q1_, double q2_)
      : p1(p1_), p2(p2_), q1(q1_), q2(q2_) {
    if (!(0.0 <= p1 && p1 < p2 && p2 <= 1.0 && 0.0 <= q1 && q1 < q2 && q2 <= 1.0))
      throw DomainError("RectRegion: need 0 <= p1 < p2 <= 1 and 0 <= q1 < q2 <= 1");
  }
};

// tau = 4 int C dC - 1 over the unit square.
inline double tau_global(const CopulaModel& m,
                         const QuadratureRule& rule = default_rule()) {
  const double acc =
      integrate2d([&](double u, double v) { return cdf(m, u, v) * pdf(m, u, v); }, rule);
  return 4.0 * acc - 1.0;
}

// Lower-corner local tau: 4 int_[0,p]x[0,q] C dC / C(p,q)^2 - 1.
inline double tau_ll(const CopulaModel& m, double p, double q,
                     const QuadratureRule& rule = default_rule()) {
  if (!(p > 0.0 && p <= 1.0 && q > 0.0 && q <= 1.0))
    throw DomainError("tau_ll: (p,q) must lie in (0,1]^2");
  const double corner = cdf(m, p, q);
  if (corner < 1e-300) throw UndefinedValueError("tau_ll: corner mass vanishes");
  const double acc = integrate2d(
      [&](double u, double v) { return cdf(m, u, v) * pdf(m, u, v); }, rule, 0.0, p, 0.0, q);
  return 4.0 * acc / (corner * corner) - 1.0;
}

// Brute-force sign integral over [0,p]x[0,q]^2 pairs, densities only. The
// sign discontinuity is removed by splitting the inner integral at u and v
// into four smooth blocks; the corner mass in the denominator is also
// computed from the density so the oracle never touches the cdf.
inline double tau_ll_bruteforce(const CopulaModel& m, double p, double q,
                                const QuadratureRule& base = gauss_legendre(16)) {
  auto block = [&](double a, double b, double c, double d) {
    return integrate2d([&](double x, double y) { return pdf(m, x, y); }, base, a, b, c, d);
  };
  const double corner = block(0.0, p, 0.0, q);
  if (corner < 1e-300) throw UndefinedValueError("tau_ll_bruteforce: corner mass vanishes");
  double acc = 0.0;
  const double lp = p, lq = q;
  for (std::size_t i = 0; i < base.nodes.size(); ++i) {
    const double u = base.nodes[i] * lp;
    for (std::size_t j = 0; j < base.nodes.size(); ++j) {
      const double v = base.nodes[j] * lq;
      const double inner = block(0.0, u, 0.0, v) - block(0.0, u, v, q) -
                           block(u, p, 0.0, v) + block(u, p, v, q);
      acc += base.weights[i] * base.weights[j] * pdf(m, u, v) * inner;
    }
  }
  acc *= lp * lq;
  return acc / (corner * corner);
}

namespace detail {

// Signed pair integral over R x R collapsed to 2D:
//   N = int_R c(u,v) W(u,v) du dv,
//   W(u,v) = 4C(u,v) - 2[C(p1,v)+C(p2,v)+C(u,q1)+C(u,q2)] + sum of corner C.
// W is the cdf form of the inner signed integral after splitting at (u,v).
inline double signed_pair_integral(const CopulaModel& m, const RectRegion& r,
                                   const QuadratureRule& rule) {
  const double corners = cdf(m, r.p1, r.q1) + cdf(m, r.p1, r.q2) + cdf(m, r.p2, r.q1) +
                         cdf(m, r.p2, r.q2);
  auto w = [&](double u, double v) {
    return 4.0 * cdf(m, u, v) -
           2.0 * (cdf(m, r.p1, v) + cdf(m, r.p2, v) + cdf(m, u, r.q1) + cdf(m, u, r.q2)) +
           corners;
  };
  return integrate2d([&](double u, double v) { return pdf(m, u, v) * w(u, v); }, rule,
                     r.p1, r.p2, r.q1, r.q2);
}

inline double rect_mass(const CopulaModel& m, const RectRegion& r) {
  return cdf(m, r.p2, r.q2) - cdf(m, r.p1, r.q2) - cdf(m, r.p2, r.q1) +
         cdf(m, r.p1, r.q1);
}

}  // namespace detail

// Rectangular local tau, sign integral divided by the squared rectangle mass.
inline double tau_rect_naive(const CopulaModel& m, const RectRegion& r,
                             const QuadratureRule& rule = default_rule()) {
  const double mass = detail::rect_mass(m, r);
  if (!(mass > 0.0)) throw UndefinedValueError("tau_rect_naive: zero rectangle mass");
  return detail::signed_pair_integral(m, r, rule) / (mass * mass);
}

// The modified version: cubed rectangle mass in the denominator.
inline double tau_rect_modified(const CopulaModel& m, const RectRegion& r,
                                const QuadratureRule& rule = default_rule()) {
  const double mass = detail::rect_mass(m, r);
  if (!(mass > 0.0)) throw UndefinedValueError("tau_rect_modified: zero rectangle mass");
  return detail::signed_pair_integral(m, r, rule) / (mass * mass * mass);
}

struct DiagonalLimit {
  std::vector<double> p;
  std::vector<double> value;
  double limit = 0.0;                 // value at the smallest usable p
  double max_successive_diff = 0.0;   // convergence diagnostic, not a proof
  bool truncated = false;
};

// tau_LL(p,p) along a decreasing sequence of p.
inline DiagonalLimit lambda_ll_kendall(const CopulaModel& m,
                                       std::vector<double> ps = {0.2, 0.1, 0.05, 0.025},
                                       const QuadratureRule& rule = default_rule()) {
  DiagonalLimit out;
  for (double p : ps) {
    double t;
    try {
      t = tau_ll(m, p, p, rule);
    } catch (const std::exception&) {
      out.truncated = true;
      break;
    }
    if (!std::isfinite(t)) {
      out.truncated = true;
      break;
    }
    out.p.push_back(p);
    out.value.push_back(t);
  }
  if (out.value.empty()) throw UndefinedValueError("lambda_ll_kendall: no usable points");
  out.limit = out.value.back();
  for (std::size_t k = 1; k < out.value.size(); ++k)
    out.max_successive_diff =
        std::max(out.max_successive_diff, std::abs(out.value[k] - out.value[k - 1]));
  return out;
}

}  // namespace cld
