#pragma once

// Archimedean generator bundles: psi, its inverse, and derivatives through
// order four, both directly and in the exponent form psi(t) = exp(A(t)).
// Either side determines the other:
//   psi'   = A1 psi
//   psi''  = (A2 + A1^2) psi
//   psi''' = (A3 + 3 A2 A1 + A1^3) psi
//   psi'''' = (A4 + 4 A3 A1 + 3 A2^2 + 6 A1^2 A2 + A1^4) psi

#include <array>
#include <cmath>
#include <functional>

#include "cld/errors.hpp"

namespace cld {

struct GeneratorBundle {
  std::function<double(double)> psi;          // t >= 0 -> (0,1]
  std::function<double(double)> psi_inverse;  // s in (0,1] -> t
  std::function<double(double)> a;            // A(t) = log psi(t)
  std::array<std::function<double(double)>, 4> a_deriv;  // A', A'', A''', A''''

  double psi_deriv(int k, double t) const {
    const double a1 = a_deriv[0](t);
    if (k == 1) return a1 * psi(t);
    const double a2 = a_deriv[1](t);
    if (k == 2) return (a2 + a1 * a1) * psi(t);
    const double a3 = a_deriv[2](t);
    if (k == 3) return (a3 + 3.0 * a2 * a1 + a1 * a1 * a1) * psi(t);
    const double a4 = a_deriv[3](t);
    if (k == 4)
      return (a4 + 4.0 * a3 * a1 + 3.0 * a2 * a2 + 6.0 * a1 * a1 * a2 +
              a1 * a1 * a1 * a1) *
             psi(t);
    throw UnsupportedFamilyError("psi_deriv: k must be 1..4");
  }
};

// Frank: psi(t) = -(1/theta) log(1 - (1-e^-theta) e^-t).
// With g(t) = w/(1-w), w = (1-e^-theta) e^-t, the derivatives telescope:
// psi' = -g/theta, psi'' = (g+g^2)/theta, etc. A-derivatives come from the
// psi side via the exponent identities.
inline GeneratorBundle frank_generator(double theta) {
  if (theta == 0.0) throw UnsupportedFamilyError("frank_generator: theta must be nonzero");
  const double em = -std::expm1(-theta);  // 1 - e^-theta
  auto w_of = [em](double t) { return em * std::exp(-t); };
  auto psi = [theta, w_of](double t) { return -std::log1p(-w_of(t)) / theta; };
  auto psi_inv = [theta, em](double s) {
    return -std::log(-std::expm1(-theta * s) / em);
  };
  // psi^(k) expressed through g = w/(1-w).
  auto g_of = [w_of](double t) {
    const double w = w_of(t);
    return w / (1.0 - w);
  };
  auto d1 = [theta, g_of](double t) { return -g_of(t) / theta; };
  auto d2 = [theta, g_of](double t) {
    const double g = g_of(t);
    return g * (1.0 + g) / theta;
  };
  auto d3 = [theta, g_of](double t) {
    const double g = g_of(t);
    return -(1.0 + 2.0 * g) * g * (1.0 + g) / theta;
  };
  auto d4 = [theta, g_of](double t) {
    const double g = g_of(t);
    return g * (1.0 + g) * (1.0 + 6.0 * g + 6.0 * g * g) / theta;
  };
  GeneratorBundle b;
  b.psi = psi;
  b.psi_inverse = psi_inv;
  b.a = [psi](double t) { return std::log(psi(t)); };
  // A^(k) from psi^(k) by inverting the exponent identities.
  b.a_deriv[0] = [psi, d1](double t) { return d1(t) / psi(t); };
  b.a_deriv[1] = [psi, d1, d2](double t) {
    const double p = psi(t), a1 = d1(t) / p;
    return d2(t) / p - a1 * a1;
  };
  b.a_deriv[2] = [psi, d1, d2, d3](double t) {
    const double p = psi(t), a1 = d1(t) / p;
    const double a2 = d2(t) / p - a1 * a1;
    return d3(t) / p - 3.0 * a2 * a1 - a1 * a1 * a1;
  };
  b.a_deriv[3] = [psi, d1, d2, d3, d4](double t) {
    const double p = psi(t), a1 = d1(t) / p;
    const double a2 = d2(t) / p - a1 * a1;
    const double a3 = d3(t) / p - 3.0 * a2 * a1 - a1 * a1 * a1;
    return d4(t) / p - 4.0 * a3 * a1 - 3.0 * a2 * a2 - 6.0 * a1 * a1 * a2 -
           a1 * a1 * a1 * a1;
  };
  return b;
}

// Clayton: psi(t) = (1+t)^(-1/theta), A(t) = -(1/theta) log(1+t).
inline GeneratorBundle clayton_generator(double theta) {
  if (!(theta > 0.0)) throw UnsupportedFamilyError("clayton_generator: theta must be > 0");
  GeneratorBundle b;
  b.psi = [theta](double t) { return std::pow(1.0 + t, -1.0 / theta); };
  b.psi_inverse = [theta](double s) { return std::pow(s, -theta) - 1.0; };
  b.a = [theta](double t) { return -std::log1p(t) / theta; };
  b.a_deriv[0] = [theta](double t) { return -1.0 / (theta * (1.0 + t)); };
  b.a_deriv[1] = [theta](double t) {
    const double d = 1.0 + t;
    return 1.0 / (theta * d * d);
  };
  b.a_deriv[2] = [theta](double t) {
    const double d = 1.0 + t;
    return -2.0 / (theta * d * d * d);
  };
  b.a_deriv[3] = [theta](double t) {
    const double d = 1.0 + t;
    return 6.0 / (theta * d * d * d * d);
  };
  return b;
}

// Gumbel-Hougaard: A(t) = -t^(1/theta), psi_inverse(s) = (-log s)^theta.
inline GeneratorBundle gumbel_hougaard_generator(double theta) {
  if (!(theta >= 1.0))
    throw UnsupportedFamilyError("gumbel_hougaard_generator: theta must be >= 1");
  const double e = 1.0 / theta;
  GeneratorBundle b;
  b.psi = [e](double t) { return std::exp(-std::pow(t, e)); };
  b.psi_inverse = [theta](double s) { return std::pow(-std::log(s), theta); };
  b.a = [e](double t) { return -std::pow(t, e); };
  b.a_deriv[0] = [e](double t) { return -e * std::pow(t, e - 1.0); };
  b.a_deriv[1] = [e](double t) { return -e * (e - 1.0) * std::pow(t, e - 2.0); };
  b.a_deriv[2] = [e](double t) {
    return -e * (e - 1.0) * (e - 2.0) * std::pow(t, e - 3.0);
  };
  b.a_deriv[3] = [e](double t) {
    return -e * (e - 1.0) * (e - 2.0) * (e - 3.0) * std::pow(t, e - 4.0);
  };
  return b;
}

// Ali-Mikhail-Haq: psi(t) = (1-theta)/(e^t - theta), theta in [0,1).
inline GeneratorBundle ali_mikhail_haq_generator(double theta) {
  if (!(theta >= 0.0 && theta < 1.0))
    throw UnsupportedFamilyError("ali_mikhail_haq_generator: theta must be in [0,1)");
  GeneratorBundle b;
  b.psi = [theta](double t) { return (1.0 - theta) / (std::exp(t) - theta); };
  b.psi_inverse = [theta](double s) { return std::log((1.0 - theta + theta * s) / s); };
  b.a = [theta](double t) {
    return std::log(1.0 - theta) - std::log(std::exp(t) - theta);
  };
  b.a_deriv[0] = [theta](double t) {
    const double E = std::exp(t);
    return -E / (E - theta);
  };
  b.a_deriv[1] = [theta](double t) {
    const double E = std::exp(t), D = E - theta;
    return theta * E / (D * D);
  };
  b.a_deriv[2] = [theta](double t) {
    const double E = std::exp(t), D = E - theta;
    return -theta * E * (E + theta) / (D * D * D);
  };
  b.a_deriv[3] = [theta](double t) {
    const double E = std::exp(t), D = E - theta;
    return theta * E * (E * E + 4.0 * theta * E + theta * theta) / (D * D * D * D);
  };
  return b;
}

// C(u,v) = psi(psi^-1(u) + psi^-1(v)).
inline double archimedean_cdf(const GeneratorBundle& b, double u, double v) {
  return b.psi(b.psi_inverse(u) + b.psi_inverse(v));
}

// c(u,v) = psi''(t) / (psi'(psi^-1(u)) psi'(psi^-1(v))).
inline double archimedean_pdf(const GeneratorBundle& b, double u, double v) {
  const double tu = b.psi_inverse(u);
  const double tv = b.psi_inverse(v);
  return b.psi_deriv(2, tu + tv) / (b.psi_deriv(1, tu) * b.psi_deriv(1, tv));
}

// dC/du = psi'(psi^-1(u) + psi^-1(v)) / psi'(psi^-1(u)).
inline double archimedean_conditional_cdf(const GeneratorBundle& b, double v,
                                          double given_u) {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  const double tu = b.psi_inverse(given_u);
  return b.psi_deriv(1, tu + b.psi_inverse(v)) / b.psi_deriv(1, tu);
}

}  // namespace cld
