#pragma once

// Sample-based estimation of local and relative local dependence: biweight
// kernel moments, the bilinear-fit estimator, the naive relative estimator,
// local likelihood fitting against the constant-r family, bootstrap
// dependence maps, and the squared-error summary over dense grid points.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cld/copula.hpp"
#include "cld/errors.hpp"
#include "cld/normal.hpp"
#include "cld/quadrature.hpp"
#include "cld/rng.hpp"

namespace cld {

inline double biweight(double u) {
  if (u < -1.0 || u > 1.0) return 0.0;
  const double s = 1.0 - u * u;
  return (15.0 / 16.0) * s * s;
}

// int u^2 K(u) du for the biweight kernel.
inline constexpr double kBiweightSecondMoment = 1.0 / 7.0;

struct KernelConfig {
  double h1 = 0.1;
  double h2 = 0.1;
  double s2 = kBiweightSecondMoment;
};

// Rule-of-thumb bandwidth on the unit square. Second-derivative estimation
// needs far wider windows than density estimation: the noise of the
// curvature estimator grows like n^(-1/2) h^(-3), so h must stay large.
inline KernelConfig default_kernel_config(std::size_t n) {
  const double h = std::pow(static_cast<double>(n), -0.1);
  return {h, h, kBiweightSecondMoment};
}

struct KernelMoments {
  double g00 = 0.0, g10 = 0.0, g01 = 0.0, g11 = 0.0;
};

// The four weighted moment sums with K_h(.) = K(./h)/h:
//   g00 = n^-1 sum K K,  g10 = n^-1 sum X K K,
//   g01 = n^-1 sum Y K K, g11 = n^-1 sum X Y K K.
inline KernelMoments kernel_moments(const SampleSet& s, double x, double y,
                                    const KernelConfig& cfg) {
  KernelMoments m;
  const double inv = 1.0 / (cfg.h1 * cfg.h2);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double du = (s.u[i] - x) / cfg.h1;
    if (du < -1.0 || du > 1.0) continue;
    const double dv = (s.v[i] - y) / cfg.h2;
    if (dv < -1.0 || dv > 1.0) continue;
    const double w = biweight(du) * biweight(dv) * inv;
    m.g00 += w;
    m.g10 += s.u[i] * w;
    m.g01 += s.v[i] * w;
    m.g11 += s.u[i] * s.v[i] * w;
  }
  const double n = static_cast<double>(s.size());
  m.g00 /= n;
  m.g10 /= n;
  m.g01 /= n;
  m.g11 /= n;
  return m;
}

namespace detail {
inline std::optional<double> i_hat_from_moments(const KernelMoments& m,
                                                const KernelConfig& cfg) {
  if (!(m.g00 > 0.0)) return std::nullopt;
  const double num = m.g11 - m.g01 * m.g10 / m.g00;
  const double den = cfg.h1 * cfg.h1 * cfg.h2 * cfg.h2 * cfg.s2 * cfg.s2 * m.g00;
  return num / den;
}
}  // namespace detail

// Bilinear-fit estimate of the local dependence; empty when no mass falls
// inside the kernel window.
inline std::optional<double> estimate_local_dep(const SampleSet& s, double x, double y,
                                                const KernelConfig& cfg) {
  return detail::i_hat_from_moments(kernel_moments(s, x, y, cfg), cfg);
}

// Naive relative estimate: the same numerator over the squared density
// estimate, i.e. r_hat = i_hat / g00.
inline std::optional<double> estimate_relative_naive(const SampleSet& s, double x,
                                                     double y, const KernelConfig& cfg) {
  const auto m = kernel_moments(s, x, y, cfg);
  const auto i = detail::i_hat_from_moments(m, cfg);
  if (!i) return std::nullopt;
  return *i / m.g00;
}

// Pseudo log-likelihood of the constant-r family over the whole sample.
inline double frank_pseudo_loglik(const SampleSet& s, double theta) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    acc += detail::frank_log_pdf(theta, s.u[i], s.v[i]);
  return acc;
}

// Golden-section maximizer of the pseudo log-likelihood on [-30, 30].
inline double frank_global_pseudo_mle(const SampleSet& s) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = -30.0, b = 30.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = frank_pseudo_loglik(s, c), fd = frank_pseudo_loglik(s, d);
  for (int it = 0; it < 200 && b - a > 1e-10; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = frank_pseudo_loglik(s, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = frank_pseudo_loglik(s, d);
    }
  }
  return 0.5 * (a + b);
}

// Candidate parameters centred on `center`: center - range, ..., center + range.
inline std::vector<double> frank_candidate_grid(double center, double range = 4.0,
                                                double step = 0.2) {
  std::vector<double> out;
  const int half = static_cast<int>(std::llround(range / step));
  for (int k = -half; k <= half; ++k) out.push_back(center + k * step);
  return out;
}

struct LocalFrankFit {
  bool low_density = false;
  double theta_hat = 0.0;
  double r_hat = 0.0;        // 2 theta_hat
  double objective = 0.0;
};

// Kernel-weighted local likelihood: the data term minus the window integral
// of the weighted density. The kernel is truncated at the unit square
// without renormalization. Ties break toward smaller |theta|.
inline LocalFrankFit local_frank_fit(const SampleSet& s, double x, double y,
                                     const KernelConfig& cfg,
                                     const std::vector<double>& candidates,
                                     const QuadratureRule& rule = gauss_legendre(16)) {
  if (candidates.empty()) throw std::invalid_argument("local_frank_fit: no candidates");
  LocalFrankFit fit;
  // In-window samples and their kernel weights.
  std::vector<std::size_t> idx;
  std::vector<double> w;
  const double inv = 1.0 / (cfg.h1 * cfg.h2);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double du = (s.u[i] - x) / cfg.h1;
    if (du < -1.0 || du > 1.0) continue;
    const double dv = (s.v[i] - y) / cfg.h2;
    if (dv < -1.0 || dv > 1.0) continue;
    const double wi = biweight(du) * biweight(dv) * inv;
    if (wi > 0.0) {
      idx.push_back(i);
      w.push_back(wi);
    }
  }
  if (idx.empty()) {
    fit.low_density = true;
    return fit;
  }
  // Window box clipped to the square, with theta-independent kernel values
  // cached at the tensor nodes.
  const double ax = std::max(0.0, x - cfg.h1), bx = std::min(1.0, x + cfg.h1);
  const double ay = std::max(0.0, y - cfg.h2), by = std::min(1.0, y + cfg.h2);
  const std::size_t nn = rule.nodes.size();
  std::vector<double> qx(nn), qy(nn), kx(nn), ky(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    qx[i] = ax + rule.nodes[i] * (bx - ax);
    qy[i] = ay + rule.nodes[i] * (by - ay);
    kx[i] = biweight((qx[i] - x) / cfg.h1) / cfg.h1;
    ky[i] = biweight((qy[i] - y) / cfg.h2) / cfg.h2;
  }
  const double n = static_cast<double>(s.size());
  bool first = true;
  for (double theta : candidates) {
    double data_term = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k)
      data_term += w[k] * detail::frank_log_pdf(theta, s.u[idx[k]], s.v[idx[k]]);
    data_term /= n;
    double integral = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < nn; ++j) {
        const double c = std::abs(theta) < 1e-9
                             ? 1.0
                             : std::exp(detail::frank_log_pdf(theta, qx[i], qy[j]));
        row += rule.weights[j] * ky[j] * c;
      }
      integral += rule.weights[i] * kx[i] * row;
    }
    integral *= (bx - ax) * (by - ay);
    const double obj = data_term - integral;
    const bool better =
        first || obj > fit.objective ||
        (obj == fit.objective && std::abs(theta) < std::abs(fit.theta_hat));
    if (better) {
      fit.theta_hat = theta;
      fit.objective = obj;
      first = false;
    }
  }
  fit.r_hat = 2.0 * fit.theta_hat;
  return fit;
}

enum class PointLabel { positive, negative, neutral, low_density };

inline const char* label_name(PointLabel l) {
  switch (l) {
    case PointLabel::positive: return "positive";
    case PointLabel::negative: return "negative";
    case PointLabel::neutral: return "neutral";
    case PointLabel::low_density: return "low-density";
  }
  return "?";
}

struct EstimatePoint {
  double x = 0.0, y = 0.0;
  double g00 = 0.0;
  std::optional<double> i_hat;
  std::optional<double> r_hat;
  std::optional<double> theta_hat;         // local likelihood fit, when run
  std::optional<double> bootstrap_median;  // median resampled i_hat, when run
  PointLabel label = PointLabel::neutral;
};

struct EstimateReport {
  std::vector<EstimatePoint> points;
  KernelConfig config;
  double mask_threshold = 0.25;
  std::uint64_t seed = 0;
  int bootstrap = 0;
  double alpha = 0.05;
};

// Point estimates (no classification) on a rectangular grid.
inline EstimateReport estimate_grid(const SampleSet& s, const std::vector<double>& grid,
                                    const KernelConfig& cfg, bool with_frank,
                                    double mask_threshold = 0.25) {
  EstimateReport rep;
  rep.config = cfg;
  rep.mask_threshold = mask_threshold;
  rep.seed = s.seed;
  std::vector<double> candidates;
  if (with_frank)
    candidates = frank_candidate_grid(frank_global_pseudo_mle(s));
  for (double x : grid) {
    for (double y : grid) {
      EstimatePoint p;
      p.x = x;
      p.y = y;
      const auto m = kernel_moments(s, x, y, cfg);
      p.g00 = m.g00;
      p.i_hat = detail::i_hat_from_moments(m, cfg);
      if (p.i_hat && m.g00 > 0.0) p.r_hat = *p.i_hat / m.g00;
      if (m.g00 < mask_threshold) p.label = PointLabel::low_density;
      if (with_frank && p.label != PointLabel::low_density) {
        const auto fit = local_frank_fit(s, x, y, cfg, candidates);
        if (!fit.low_density) p.theta_hat = fit.theta_hat;
      }
      rep.points.push_back(p);
    }
  }
  return rep;
}

// Pointwise percentile-bootstrap classification of i_hat against zero.
inline EstimateReport dependence_map(const SampleSet& s, const std::vector<double>& grid,
                                     const KernelConfig& cfg, int bootstrap, double alpha,
                                     RngStream rng, double mask_threshold = 0.25) {
  if (bootstrap < 50) throw std::invalid_argument("dependence_map: need >= 50 replicates");
  EstimateReport rep = estimate_grid(s, grid, cfg, /*with_frank=*/false, mask_threshold);
  rep.bootstrap = bootstrap;
  rep.alpha = alpha;
  rep.seed = rng.seed();
  const std::size_t n = s.size();
  const std::size_t npts = rep.points.size();
  std::vector<std::vector<double>> draws(npts);
  std::vector<std::size_t> counts(n);
  const double inv = 1.0 / (cfg.h1 * cfg.h2);
  // Replicate b draws from the stream after the caller's: deterministic and
  // collision-free with the data stream.
  for (int b = 0; b < bootstrap; ++b) {
    RngStream rb(rng.seed(), rng.stream_id() + static_cast<std::uint64_t>(b) + 1);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[rb.next_below(n)];
    for (std::size_t pi = 0; pi < npts; ++pi) {
      auto& p = rep.points[pi];
      if (p.label == PointLabel::low_density) continue;
      KernelMoments m;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[i] == 0) continue;
        const double du = (s.u[i] - p.x) / cfg.h1;
        if (du < -1.0 || du > 1.0) continue;
        const double dv = (s.v[i] - p.y) / cfg.h2;
        if (dv < -1.0 || dv > 1.0) continue;
        const double w = counts[i] * biweight(du) * biweight(dv) * inv;
        m.g00 += w;
        m.g10 += s.u[i] * w;
        m.g01 += s.v[i] * w;
        m.g11 += s.u[i] * s.v[i] * w;
      }
      m.g00 /= n;
      m.g10 /= n;
      m.g01 /= n;
      m.g11 /= n;
      const auto ih = detail::i_hat_from_moments(m, cfg);
      if (ih) draws[pi].push_back(*ih);
    }
  }
  for (std::size_t pi = 0; pi < npts; ++pi) {
    auto& p = rep.points[pi];
    if (p.label == PointLabel::low_density) continue;
    auto& d = draws[pi];
    if (d.size() < static_cast<std::size_t>(bootstrap) / 2) {
      p.label = PointLabel::neutral;  // degenerate bootstrap
      continue;
    }
    std::sort(d.begin(), d.end());
    const auto quantile = [&](double q) {
      const double pos = q * (d.size() - 1);
      const std::size_t lo = static_cast<std::size_t>(pos);
      const std::size_t hi = std::min(lo + 1, d.size() - 1);
      return d[lo] + (pos - lo) * (d[hi] - d[lo]);
    };
    p.bootstrap_median = quantile(0.5);
    const double lo = quantile(alpha / 2.0);
    const double hi = quantile(1.0 - alpha / 2.0);
    if (lo > 0.0)
      p.label = PointLabel::positive;
    else if (hi < 0.0)
      p.label = PointLabel::negative;
    else
      p.label = PointLabel::neutral;
  }
  return rep;
}

enum class RMethod { naive, local_frank };

// Squared-error sum of the relative-dependence estimates against a truth
// function, over points that pass the density mask.
inline double error_metric(const EstimateReport& rep, RMethod method,
                           const std::function<double(double, double)>& truth) {
  double acc = 0.0;
  std::size_t used = 0;
  for (const auto& p : rep.points) {
    if (p.label == PointLabel::low_density) continue;
    std::optional<double> est;
    if (method == RMethod::naive)
      est = p.r_hat;
    else if (p.theta_hat)
      est = 2.0 * *p.theta_hat;
    if (!est) continue;
    const double d = *est - truth(p.x, p.y);
    acc += d * d;
    ++used;
  }
  if (used == 0) throw UndefinedValueError("error_metric: no unmasked grid points");
  return acc;
}

struct ScenarioSample {
  SampleSet raw;    // original scale
  SampleSet ranks;  // empirical-cdf transform, exactly uniform margins
};

namespace detail {
inline std::vector<double> midrank_unit(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return a < b;
  });
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) out[idx[r]] = (r + 0.5) / n;
  return out;
}
}  // namespace detail

// X standard normal, Y = X^2 + eps with standard normal noise: zero global
// correlation but sign-switching local dependence across x = 0.
inline ScenarioSample simulate_parabola(std::size_t n, RngStream rng) {
  ScenarioSample out;
  out.raw.seed = rng.seed();
  out.raw.stream = rng.stream_id();
  out.raw.source = "parabola";
  for (std::size_t i = 0; i < n; ++i) {
    const double x = normal_quantile(rng.next_double());
    const double eps = normal_quantile(rng.next_double());
    out.raw.u.push_back(x);
    out.raw.v.push_back(x * x + eps);
  }
  out.ranks = out.raw;
  out.ranks.u = detail::midrank_unit(out.raw.u);
  out.ranks.v = detail::midrank_unit(out.raw.v);
  return out;
}

}  // namespace cld
