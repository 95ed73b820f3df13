#pragma once

// Discretized exponential-bilinear copula density a(u) b(v) exp(theta u v),
// fitted by iterative proportional fitting on an n x n grid of cell
// midpoints. Both margins carry cell mass exactly 1/n at the fixed point.

#include <cmath>
#include <memory>
#include <vector>

#include "cld/errors.hpp"
#include "cld/grid.hpp"

namespace cld {

struct MicsDensity {
  double theta = 0.0;
  int n = 0;
  std::vector<double> a;     // row normalizers at cell midpoints
  std::vector<double> b;     // column normalizers
  std::vector<double> mass;  // cell masses, row-major, each row/col sums to 1/n
  std::vector<double> cum;   // (n+1)x(n+1) prefix sums of mass for the exact cdf
  int iterations = 0;
  double residual = 0.0;

  double midpoint(int i) const { return (i + 0.5) / n; }
  double cell_mass(int i, int j) const { return mass[i * n + j]; }
  double density(int i, int j) const { return mass[i * n + j] * n * n; }

  // Density at a point: the containing cell's value (piecewise constant).
  double density_at(double u, double v) const {
    int i = static_cast<int>(u * n);
    int j = static_cast<int>(v * n);
    if (i >= n) i = n - 1;
    if (j >= n) j = n - 1;
    return density(i, j);
  }

  // Exact cdf of the piecewise-constant density: bilinear within each cell.
  double cdf_at(double u, double v) const {
    const double su = u * n, sv = v * n;
    int i = static_cast<int>(su), j = static_cast<int>(sv);
    if (i >= n) i = n - 1;
    if (j >= n) j = n - 1;
    const double fu = su - i, fv = sv - j;
    const int w = n + 1;
    const double c00 = cum[i * w + j], c01 = cum[i * w + j + 1];
    const double c10 = cum[(i + 1) * w + j], c11 = cum[(i + 1) * w + j + 1];
    return c00 * (1 - fu) * (1 - fv) + c01 * (1 - fu) * fv + c10 * fu * (1 - fv) +
           c11 * fu * fv;
  }

  // P(V <= v | U = u): linear interpolation of row prefix masses, scaled by n.
  double conditional_cdf_at(double v, double given_u) const {
    int i = static_cast<int>(given_u * n);
    if (i >= n) i = n - 1;
    const double sv = v * n;
    int j = static_cast<int>(sv);
    if (j >= n) j = n - 1;
    double acc = 0.0;
    for (int jj = 0; jj < j; ++jj) acc += cell_mass(i, jj);
    acc += (sv - j) * cell_mass(i, j);
    return acc * n;
  }

  double conditional_quantile_at(double p, double given_u) const {
    int i = static_cast<int>(given_u * n);
    if (i >= n) i = n - 1;
    double target = p / n;  // row mass scale
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double m = cell_mass(i, j);
      if (acc + m >= target)
        return (j + (target - acc) / m) / n;
      acc += m;
    }
    return 1.0;
  }

  Grid2D density_grid() const {
    std::vector<double> mid(n);
    for (int i = 0; i < n; ++i) mid[i] = midpoint(i);
    Grid2D g(mid, mid);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g.at(i, j) = density(i, j);
    return g;
  }
};

inline MicsDensity mics_density(double theta, int resolution, double tol = 1e-10,
                                int max_iterations = 10000) {
  if (resolution < 2) throw UnsupportedFamilyError("mics_density: resolution must be >= 2");
  const int n = resolution;
  MicsDensity d;
  d.theta = theta;
  d.n = n;
  d.a.assign(n, 1.0);
  d.b.assign(n, 1.0);

  std::vector<double> kernel(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      kernel[i * n + j] = std::exp(theta * d.midpoint(i) * d.midpoint(j));

  // Alternating row/column scaling; density row-average must equal 1.
  double residual = 0.0;
  int it = 0;
  for (; it < max_iterations; ++it) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += d.b[j] * kernel[i * n + j];
      d.a[i] = n / s;
    }
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += d.a[i] * kernel[i * n + j];
      d.b[j] = n / s;
    }
    // Margin residual in cell-mass scale.
    residual = 0.0;
    for (int i = 0; i < n; ++i) {
      double srow = 0.0, scol = 0.0;
      for (int j = 0; j < n; ++j) {
        srow += d.a[i] * d.b[j] * kernel[i * n + j];
        scol += d.a[j] * d.b[i] * kernel[j * n + i];
      }
      residual = std::max(residual, std::abs(srow / (n * n) - 1.0 / n));
      residual = std::max(residual, std::abs(scol / (n * n) - 1.0 / n));
    }
    if (residual < tol) break;
  }
  if (residual >= tol)
    throw ConvergenceError("mics_density: margins did not converge", residual, it);
  d.iterations = it + 1;
  d.residual = residual;

  d.mass.resize(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      d.mass[i * n + j] = d.a[i] * d.b[j] * kernel[i * n + j] / (n * n);

  const int w = n + 1;
  d.cum.assign(w * w, 0.0);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      d.cum[i * w + j] = d.mass[(i - 1) * n + (j - 1)] + d.cum[(i - 1) * w + j] +
                         d.cum[i * w + (j - 1)] - d.cum[(i - 1) * w + (j - 1)];
  return d;
}

}  // namespace cld
