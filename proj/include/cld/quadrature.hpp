#pragma once

// Gauss-Legendre quadrature on [0,1], plus composite (panelled) rules and
// tensor-product integration helpers for 2D rectangles.

#include <cstdlib>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cld {

struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing, inside (0,1)
  std::vector<double> weights;  // positive, summing to 1
  int order = 0;                // polynomial exactness degree is 2*order-1 per panel
};

// Legendre P_n and P_n' at x via the three-term recurrence.
namespace detail {
inline void legendre_eval(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}
}  // namespace detail

// Gauss-Legendre rule mapped from [-1,1] to [0,1].
inline QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  if (order == 1) {
    rule.nodes[0] = 0.5;
    rule.weights[0] = 1.0;
    return rule;
  }
  for (int i = 0; i < order; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double p = 0.0, dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      detail::legendre_eval(order, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    detail::legendre_eval(order, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // cos() runs high-to-low; store ascending.
    rule.nodes[order - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[order - 1 - i] = 0.5 * w;
  }
  return rule;
}

// Repeats a base rule over `panels` equal subintervals of [0,1].
inline QuadratureRule composite(const QuadratureRule& base, int panels) {
  if (panels < 1) throw std::invalid_argument("composite: panels must be >= 1");
  QuadratureRule rule;
  rule.order = base.order;
  const double width = 1.0 / panels;
  rule.nodes.reserve(base.nodes.size() * panels);
  rule.weights.reserve(base.nodes.size() * panels);
  for (int p = 0; p < panels; ++p) {
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      rule.nodes.push_back((p + base.nodes[i]) * width);
      rule.weights.push_back(base.weights[i] * width);
    }
  }
  return rule;
}

// Repeats a base rule over panels with explicit boundaries (graded panels
// resolve integrable corner singularities of tail-dependent densities).
inline QuadratureRule composite_with_breaks(const QuadratureRule& base,
                                            const std::vector<double>& breaks) {
  if (breaks.size() < 2) throw std::invalid_argument("composite_with_breaks: need >= 2 breaks");
  QuadratureRule rule;
  rule.order = base.order;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    if (!(b > a)) throw std::invalid_argument("composite_with_breaks: breaks must increase");
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      rule.nodes.push_back(a + base.nodes[i] * (b - a));
      rule.weights.push_back(base.weights[i] * (b - a));
    }
  }
  return rule;
}

// Symmetric geometric grading toward both endpoints of [0,1].
inline QuadratureRule corner_graded_rule(int order = 16, int levels = 6) {
  std::vector<double> breaks;
  double e = 1.0;
  for (int k = 0; k < levels; ++k) {
    e /= 8.0;
    breaks.push_back(e);
  }
  std::vector<double> all;
  for (auto it = breaks.rbegin(); it != breaks.rend(); ++it) all.push_back(*it);
  all.push_back(0.5);
  for (double b : breaks) all.push_back(1.0 - b);
  std::vector<double> full = {0.0};
  full.insert(full.end(), all.begin(), all.end());
  full.push_back(1.0);
  return composite_with_breaks(gauss_legendre(order), full);
}

// Per-axis node count for the default rules; CLD_QUAD_ORDER overrides for CI speed.
inline int default_quad_order() {
  if (const char* env = std::getenv("CLD_QUAD_ORDER")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 32;
}

// Default 1D/2D rule: composite Gauss-Legendre over panels graded
// geometrically (ratio 8) toward both endpoints, where copula densities may
// carry integrable singularities. Half the nominal order per panel keeps the
// node budget near the plain composite rule.
inline const QuadratureRule& default_rule() {
  static const QuadratureRule rule =
      corner_graded_rule(std::max(2, default_quad_order() / 2), 6);
  return rule;
}

template <typename F>
double integrate(F&& f, const QuadratureRule& rule, double a = 0.0, double b = 1.0) {
  const double len = b - a;
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(a + rule.nodes[i] * len);
  return sum * len;
}

template <typename F>
double integrate2d(F&& f, const QuadratureRule& rule, double ax = 0.0, double bx = 1.0,
                   double ay = 0.0, double by = 1.0) {
  const double lx = bx - ax, ly = by - ay;
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = ax + rule.nodes[i] * lx;
    double row = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
      row += rule.weights[j] * f(x, ay + rule.nodes[j] * ly);
    sum += rule.weights[i] * row;
  }
  return sum * lx * ly;
}

}  // namespace cld
