#pragma once

// Parametric bivariate copula families: validated construction, exact
// cdf/pdf, conditional distributions, and conditional-inversion sampling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cld/errors.hpp"
#include "cld/generator.hpp"
#include "cld/mics.hpp"
#include "cld/normal.hpp"
#include "cld/quadrature.hpp"
#include "cld/rng.hpp"
#include "cld/roots.hpp"

namespace cld {

enum class Family {
  independence,
  frank,
  clayton,
  gumbel_hougaard,
  ali_mikhail_haq,
  fgm,
  gaussian,
  mics,
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::independence: return "independence";
    case Family::frank: return "frank";
    case Family::clayton: return "clayton";
    case Family::gumbel_hougaard: return "gumbel";
    case Family::ali_mikhail_haq: return "amh";
    case Family::fgm: return "fgm";
    case Family::gaussian: return "gaussian";
    case Family::mics: return "mics";
  }
  return "?";
}

class CopulaModel {
 public:
  static CopulaModel independence() { return CopulaModel(Family::independence, 0.0); }
  static CopulaModel frank(double theta) {
    if (theta == 0.0) throw std::invalid_argument("frank: theta must be nonzero");
    return CopulaModel(Family::frank, theta);
  }
  static CopulaModel clayton(double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("clayton: theta must be > 0");
    return CopulaModel(Family::clayton, theta);
  }
  static CopulaModel gumbel_hougaard(double theta) {
    if (!(theta >= 1.0)) throw std::invalid_argument("gumbel: theta must be >= 1");
    return CopulaModel(Family::gumbel_hougaard, theta);
  }
  static CopulaModel ali_mikhail_haq(double theta) {
    if (!(theta >= 0.0 && theta < 1.0))
      throw std::invalid_argument("amh: theta must be in [0,1)");
    return CopulaModel(Family::ali_mikhail_haq, theta);
  }
  static CopulaModel fgm(double theta) {
    if (!(theta >= -1.0 && theta <= 1.0))
      throw std::invalid_argument("fgm: theta must be in [-1,1]");
    return CopulaModel(Family::fgm, theta);
  }
  static CopulaModel gaussian(double rho) {
    if (!(rho > -1.0 && rho < 1.0))
      throw std::invalid_argument("gaussian: rho must be in (-1,1)");
    return CopulaModel(Family::gaussian, rho);
  }
  static CopulaModel mics(double theta, int resolution = 64) {
    if (resolution < 2) throw std::invalid_argument("mics: resolution must be >= 2");
    CopulaModel m(Family::mics, theta);
    m.mics_ = std::make_shared<const MicsDensity>(mics_density(theta, resolution));
    return m;
  }

  Family family() const { return family_; }
  double parameter() const { return param_; }
  const MicsDensity& mics_table() const {
    if (!mics_) throw UnsupportedFamilyError("mics_table: not a mics model");
    return *mics_;
  }
  bool is_archimedean() const {
    return family_ == Family::frank || family_ == Family::clayton ||
           family_ == Family::gumbel_hougaard || family_ == Family::ali_mikhail_haq;
  }

 private:
  CopulaModel(Family f, double p) : family_(f), param_(p) {}
  Family family_;
  double param_;
  std::shared_ptr<const MicsDensity> mics_;
};

inline GeneratorBundle generator(const CopulaModel& m) {
  switch (m.family()) {
    case Family::frank: return frank_generator(m.parameter());
    case Family::clayton: return clayton_generator(m.parameter());
    case Family::gumbel_hougaard: return gumbel_hougaard_generator(m.parameter());
    case Family::ali_mikhail_haq: return ali_mikhail_haq_generator(m.parameter());
    default:
      throw UnsupportedFamilyError("generator: family is not Archimedean");
  }
}

namespace detail {

// Frank building blocks via expm1 to dodge cancellation at small |theta*u|.
inline double frank_cdf(double theta, double u, double v) {
  const double num = std::expm1(-theta * u) * std::expm1(-theta * v);
  return -std::log1p(num / std::expm1(-theta)) / theta;
}
inline double frank_pdf(double theta, double u, double v) {
  const double A = -std::expm1(-theta);  // 1 - e^-theta
  const double Au = -std::expm1(-theta * u);
  const double Av = -std::expm1(-theta * v);
  const double den = A - Au * Av;
  return theta * A * std::exp(-theta * (u + v)) / (den * den);
}
// log c_theta(u,v), continuous through theta -> 0 where c -> 1.
inline double frank_log_pdf(double theta, double u, double v) {
  if (std::abs(theta) < 1e-9) return 0.0;
  const double A = -std::expm1(-theta);
  const double Au = -std::expm1(-theta * u);
  const double Av = -std::expm1(-theta * v);
  return std::log(theta * A) - theta * (u + v) - 2.0 * std::log(std::abs(A - Au * Av));
}
inline double frank_conditional(double theta, double v, double u) {
  const double a = std::exp(-theta * u);
  const double eu = std::expm1(-theta * u);
  const double ev = std::expm1(-theta * v);
  return a * ev / (std::expm1(-theta) + eu * ev);
}
// Solve frank_conditional(theta, v, u) = p for v.
inline double frank_conditional_inverse(double theta, double p, double u) {
  const double a = std::exp(-theta * u);
  const double d1 = std::expm1(-theta);
  const double b = 1.0 + p * d1 / (a - p * (a - 1.0));
  return -std::log(b) / theta;
}

// Bivariate standard normal cdf P(X <= h, Y <= k) with correlation rho:
// Phi(h) Phi(k) plus the classic single integral over the correlation path.
inline double bivariate_normal_cdf(double h, double k, double rho) {
  static const QuadratureRule rule = gauss_legendre(48);
  double corr = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rho * rule.nodes[i];
    const double s = 1.0 - t * t;
    corr += rule.weights[i] *
            std::exp(-(h * h - 2.0 * t * h * k + k * k) / (2.0 * s)) / std::sqrt(s);
  }
  return normal_cdf(h) * normal_cdf(k) + rho * corr / (2.0 * M_PI);
}

}  // namespace detail

inline double cdf(const CopulaModel& m, double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
    throw DomainError("cdf: (u,v) outside [0,1]^2");
  if (u == 0.0 || v == 0.0) return 0.0;
  if (u == 1.0) return v;
  if (v == 1.0) return u;
  const double t = m.parameter();
  switch (m.family()) {
    case Family::independence: return u * v;
    case Family::frank: return detail::frank_cdf(t, u, v);
    case Family::clayton:
      return std::pow(std::pow(u, -t) + std::pow(v, -t) - 1.0, -1.0 / t);
    case Family::gumbel_hougaard: {
      const double su = std::pow(-std::log(u), t), sv = std::pow(-std::log(v), t);
      return std::exp(-std::pow(su + sv, 1.0 / t));
    }
    case Family::ali_mikhail_haq:
      return u * v / (1.0 - t * (1.0 - u) * (1.0 - v));
    case Family::fgm: return u * v + t * u * v * (1.0 - u) * (1.0 - v);
    case Family::gaussian:
      return detail::bivariate_normal_cdf(normal_quantile(u), normal_quantile(v), t);
    case Family::mics: return m.mics_table().cdf_at(u, v);
  }
  throw UnsupportedFamilyError("cdf: unknown family");
}

inline double pdf(const CopulaModel& m, double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
    throw DomainError("pdf: (u,v) outside [0,1]^2");
  const double t = m.parameter();
  switch (m.family()) {
    case Family::independence: return 1.0;
    case Family::frank: return detail::frank_pdf(t, u, v);
    case Family::clayton: {
      if (u == 0.0 || v == 0.0) throw DomainError("pdf: clayton is singular at 0");
      const double s = std::pow(u, -t) + std::pow(v, -t) - 1.0;
      return (1.0 + t) * std::pow(u * v, -1.0 - t) * std::pow(s, -1.0 / t - 2.0);
    }
    case Family::gumbel_hougaard: {
      if (u == 0.0 || v == 0.0) throw DomainError("pdf: gumbel is singular at 0");
      if (u == 1.0 || v == 1.0) return t == 1.0 ? 1.0 : 0.0;  // continuous limit
      return archimedean_pdf(generator(m), u, v);
    }
    case Family::ali_mikhail_haq: {
      // Second mixed derivative of uv / D, D = 1 - t(1-u)(1-v); using
      // dC/du = v (1 - t(1-v)) / D^2.
      const double D = 1.0 - t * (1.0 - u) * (1.0 - v);
      return ((1.0 - t + 2.0 * t * v) * D -
              2.0 * t * v * (1.0 - u) * (1.0 - t * (1.0 - v))) /
             (D * D * D);
    }
    case Family::fgm: return 1.0 + t * (2.0 * u - 1.0) * (2.0 * v - 1.0);
    case Family::gaussian: {
      if (u == 0.0 || v == 0.0 || u == 1.0 || v == 1.0)
        return t == 0.0 ? 1.0 : 0.0;  // continuous limit
      const double x = normal_quantile(u), y = normal_quantile(v);
      const double s = 1.0 - t * t;
      return std::exp(-t * (t * x * x - 2.0 * x * y + t * y * y) / (2.0 * s)) /
             std::sqrt(s);
    }
    case Family::mics: return m.mics_table().density_at(u, v);
  }
  throw UnsupportedFamilyError("pdf: unknown family");
}

// P(V <= v | U = given_u) = dC/du.
inline double conditional_cdf(const CopulaModel& m, double v, double given_u) {
  if (!(given_u > 0.0 && given_u < 1.0))
    throw DomainError("conditional_cdf: given_u must be in (0,1)");
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("conditional_cdf: v outside [0,1]");
  if (v == 0.0) return 0.0;
  if (v == 1.0) return 1.0;
  const double t = m.parameter();
  switch (m.family()) {
    case Family::independence: return v;
    case Family::frank: return detail::frank_conditional(t, v, given_u);
    case Family::clayton: {
      const double s = std::pow(given_u, -t) + std::pow(v, -t) - 1.0;
      return std::pow(given_u, -t - 1.0) * std::pow(s, -1.0 / t - 1.0);
    }
    case Family::fgm:
      return v + t * v * (1.0 - v) * (1.0 - 2.0 * given_u);
    case Family::gaussian: {
      const double x = normal_quantile(given_u), y = normal_quantile(v);
      return normal_cdf((y - t * x) / std::sqrt(1.0 - t * t));
    }
    case Family::ali_mikhail_haq: {
      const double D = 1.0 - t * (1.0 - given_u) * (1.0 - v);
      return v * (1.0 - t * (1.0 - v)) / (D * D);
    }
    case Family::gumbel_hougaard:
      return archimedean_conditional_cdf(generator(m), v, given_u);
    case Family::mics: return m.mics_table().conditional_cdf_at(v, given_u);
  }
  throw UnsupportedFamilyError("conditional_cdf: unknown family");
}

// Quantile of V | U = u. Closed forms where the conditional inverts in
// closed form, bracketing bisection otherwise.
inline double conditional_quantile(const CopulaModel& m, double p, double given_u,
                                   double tol = 1e-12) {
  const double t = m.parameter();
  switch (m.family()) {
    case Family::independence: return p;
    case Family::frank: return detail::frank_conditional_inverse(t, p, given_u);
    case Family::clayton: {
      const double w = std::pow(p, -t / (1.0 + t)) - 1.0;
      return std::pow(std::pow(given_u, -t) * w + 1.0, -1.0 / t);
    }
    case Family::fgm: {
      const double A = t * (1.0 - 2.0 * given_u);
      if (std::abs(A) < 1e-12) return p;
      const double disc = (1.0 + A) * (1.0 + A) - 4.0 * A * p;
      return (1.0 + A - std::sqrt(disc)) / (2.0 * A);
    }
    case Family::mics: return m.mics_table().conditional_quantile_at(p, given_u);
    default: {
      auto f = [&](double v) { return conditional_cdf(m, v, given_u); };
      return invert_monotone(f, p, tol);
    }
  }
}

struct SampleSet {
  std::vector<double> u;
  std::vector<double> v;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string source;       // family tag or scenario name
  double parameter = 0.0;
  double ks_u = 0.0;        // Kolmogorov-Smirnov distance of each margin
  double ks_v = 0.0;
  bool ks_flagged = false;  // true when a margin exceeds the 1% band 1.63/sqrt(n)

  std::size_t size() const { return u.size(); }
};

namespace detail {
inline double ks_uniform(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max(d, std::abs((i + 1) / n - x[i]));
    d = std::max(d, std::abs(x[i] - i / n));
  }
  return d;
}
}  // namespace detail

inline SampleSet sample(const CopulaModel& m, std::size_t n, RngStream rng) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  SampleSet s;
  s.u.reserve(n);
  s.v.reserve(n);
  s.seed = rng.seed();
  s.stream = rng.stream_id();
  s.source = family_name(m.family());
  s.parameter = m.parameter();
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.next_double();
    const double w = rng.next_double();
    s.u.push_back(u);
    s.v.push_back(conditional_quantile(m, w, u));
  }
  s.ks_u = detail::ks_uniform(s.u);
  s.ks_v = detail::ks_uniform(s.v);
  const double band = 1.63 / std::sqrt(static_cast<double>(n));
  s.ks_flagged = s.ks_u > band || s.ks_v > band;
  return s;
}

// Kendall's tau of a sample, O(n log n) by merge-sort inversion counting.
inline double empirical_kendall_tau(const SampleSet& s) {
  const std::size_t n = s.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (s.u[a] != s.u[b]) return s.u[a] < s.u[b];
    return s.v[a] < s.v[b];
  });
  std::vector<double> y(n), tmp(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = s.v[idx[i]];
  std::uint64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      const std::size_t mid = lo + width, hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (y[i] <= y[j]) tmp[k++] = y[i++];
        else {
          inversions += mid - i;
          tmp[k++] = y[j++];
        }
      }
      while (i < mid) tmp[k++] = y[i++];
      while (j < hi) tmp[k++] = y[j++];
      std::copy(tmp.begin() + lo, tmp.begin() + hi, y.begin() + lo);
    }
  }
  const double pairs = 0.5 * n * (n - 1.0);
  return 1.0 - 2.0 * static_cast<double>(inversions) / pairs;
}

}  // namespace cld
