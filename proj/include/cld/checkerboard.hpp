#pragma once

// Checkerboard copulas: exact discretization of parametric families, the
// greedy block solver for densities whose log-density curvature is zeta
// times the k-th power of the density, residual maps, and the power
// transform behind the constant-r scaling structure.
//
// Scale convention: the public zeta is the continuous (density-scale)
// constant of (1/c^k) d^2 log c / du dv = zeta. The per-block equation works
// on raw cell masses, whose target is
//     zeta_block = zeta * 4^-k * n^(2k-2),
// since block log odds ~ i/n^2 and the 4-cell mass ~ 4 c/n^2. Residual maps
// report in the continuous scale so values are comparable across n.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cld/copula.hpp"
#include "cld/errors.hpp"
#include "cld/grid.hpp"
#include "cld/quadrature.hpp"
#include "cld/roots.hpp"

namespace cld {

struct CheckerboardMatrix {
  int n = 0;
  std::vector<double> mass;  // row-major cell masses; rows/cols each sum 1/n

  CheckerboardMatrix() = default;
  explicit CheckerboardMatrix(int n_) : n(n_), mass(n_ * n_, 1.0 / (n_ * n_)) {}

  double& at(int i, int j) { return mass[i * n + j]; }
  double at(int i, int j) const { return mass[i * n + j]; }
  double density(int i, int j) const { return mass[i * n + j] * n * n; }

  double row_sum(int i) const {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += at(i, j);
    return s;
  }
  double col_sum(int j) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += at(i, j);
    return s;
  }
};

// Cell masses of a parametric copula by inclusion-exclusion of its cdf.
inline CheckerboardMatrix discretize(const CopulaModel& m, int n) {
  if (n < 1) throw std::invalid_argument("discretize: n must be >= 1");
  CheckerboardMatrix cb(n);
  std::vector<double> grid(n + 1);
  for (int i = 0; i <= n; ++i) grid[i] = static_cast<double>(i) / n;
  std::vector<double> c((n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) c[i * (n + 1) + j] = cdf(m, grid[i], grid[j]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cb.at(i, j) = c[(i + 1) * (n + 1) + j + 1] - c[i * (n + 1) + j + 1] -
                    c[(i + 1) * (n + 1) + j] + c[i * (n + 1) + j];
  return cb;
}

struct PdeSpec {
  double k = 0.0;
  double zeta = 0.0;       // continuous-scale constant
  int n = 16;
  double tol = 1e-8;       // max continuous-scale block residual
  int max_sweeps = 200000; // local updates diffuse: sweeps scale like n^4
};

// Raw-mass target for the block equation.
inline double block_zeta(double zeta, double k, int n) {
  return zeta * std::pow(4.0, -k) * std::pow(static_cast<double>(n), 2.0 * k - 2.0);
}

// Solves, on raw masses {p11, p12, p21, p22}, the tilt delta with
//   log[(p11+d)(p22+d) / ((p12-d)(p21-d))] = zeta_raw * S^k,  S = block sum,
// i.e. the quadratic (1-T) d^2 + {p11+p22+(p12+p21)T} d + p11 p22 - p12 p21 T = 0
// with T = exp(zeta_raw S^k). Among roots keeping all four updated entries
// nonnegative, the smallest |delta| wins.
inline double block_delta(const std::array<double, 4>& block, double k, double zeta_raw,
                          int bi = -1, int bj = -1) {
  const double p11 = block[0], p12 = block[1], p21 = block[2], p22 = block[3];
  const double S = p11 + p12 + p21 + p22;
  if (!(S > 0.0)) throw BlockSolveError("block_delta: empty block", bi, bj);
  const double expo = zeta_raw * std::pow(S, k);
  if (!(std::abs(expo) < 700.0))
    throw BlockSolveError("block_delta: tilt exponent overflow", bi, bj);
  const double T = std::exp(expo);
  double best = 0.0;
  bool found = false;
  std::vector<double> roots;
  if (T == 1.0) {
    roots = {(p12 * p21 - p11 * p22) / S};
  } else {
    roots = solve_quadratic(1.0 - T, p11 + p22 + (p12 + p21) * T, p11 * p22 - p12 * p21 * T);
  }
  for (double d : roots) {
    if (p11 + d < 0.0 || p22 + d < 0.0 || p12 - d < 0.0 || p21 - d < 0.0) continue;
    if (!found || std::abs(d) < std::abs(best)) {
      best = d;
      found = true;
    }
  }
  if (!found) throw BlockSolveError("block_delta: no admissible root", bi, bj);
  return best;
}

// Continuous-scale residual of one 2x2 block.
namespace detail {
inline double block_residual(const CheckerboardMatrix& cb, int i, int j, double k,
                             double zeta) {
  const double p11 = cb.at(i, j), p12 = cb.at(i, j + 1);
  const double p21 = cb.at(i + 1, j), p22 = cb.at(i + 1, j + 1);
  const double S = p11 + p12 + p21 + p22;
  const double lo = std::log(p11 * p22 / (p12 * p21));
  const double stat = lo / std::pow(S, k);
  const double scale = std::pow(4.0, k) * std::pow(static_cast<double>(cb.n), 2.0 - 2.0 * k);
  return stat * scale - zeta;
}
}  // namespace detail

// Per-block continuous-scale residuals of the discretized equation; zero
// entries flag an infinite residual.
inline Grid2D residual_map(const CheckerboardMatrix& cb, double k, double zeta) {
  std::vector<double> coords(cb.n - 1);
  for (int i = 0; i + 1 < cb.n; ++i) coords[i] = static_cast<double>(i + 1) / cb.n;
  Grid2D g(coords, coords);
  for (int i = 0; i + 1 < cb.n; ++i)
    for (int j = 0; j + 1 < cb.n; ++j) {
      const bool zero = cb.at(i, j) == 0.0 || cb.at(i, j + 1) == 0.0 ||
                        cb.at(i + 1, j) == 0.0 || cb.at(i + 1, j + 1) == 0.0;
      g.at(i, j) = zero ? std::numeric_limits<double>::infinity()
                        : detail::block_residual(cb, i, j, k, zeta);
    }
  return g;
}

struct SolveResult {
  CheckerboardMatrix matrix;
  std::vector<double> residual_trace;  // max continuous residual after each sweep
  int sweeps = 0;
  bool converged = false;
  double max_residual = 0.0;
};

// Greedy row-major sweeps of all adjacent 2x2 blocks from the uniform
// matrix, each block solved exactly, until the residual map settles under
// tol or the sweep budget runs out (returned flagged, not thrown).
inline SolveResult greedy_solve(const PdeSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("greedy_solve: n must be >= 2");
  if (!(spec.tol > 0.0)) throw std::invalid_argument("greedy_solve: tol must be positive");
  SolveResult res;
  res.matrix = CheckerboardMatrix(spec.n);
  const double zraw = block_zeta(spec.zeta, spec.k, spec.n);

  auto max_residual = [&]() {
    double worst = 0.0;
    for (int i = 0; i + 1 < spec.n; ++i)
      for (int j = 0; j + 1 < spec.n; ++j)
        worst = std::max(worst,
                         std::abs(detail::block_residual(res.matrix, i, j, spec.k, spec.zeta)));
    return worst;
  };

  res.max_residual = max_residual();
  if (res.max_residual <= spec.tol) {  // uniform start is already a fixed point
    res.converged = true;
    return res;
  }
  for (int sweep = 1; sweep <= spec.max_sweeps; ++sweep) {
    for (int i = 0; i + 1 < spec.n; ++i) {
      for (int j = 0; j + 1 < spec.n; ++j) {
        auto& cb = res.matrix;
        const std::array<double, 4> block = {cb.at(i, j), cb.at(i, j + 1),
                                             cb.at(i + 1, j), cb.at(i + 1, j + 1)};
        const double d = block_delta(block, spec.k, zraw, i, j);
        cb.at(i, j) += d;
        cb.at(i + 1, j + 1) += d;
        cb.at(i, j + 1) -= d;
        cb.at(i + 1, j) -= d;
      }
    }
    res.sweeps = sweep;
    res.max_residual = max_residual();
    res.residual_trace.push_back(res.max_residual);
    if (res.max_residual <= spec.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

struct PanelCell {
  double k = 0.0;
  double zeta = 0.0;
  bool solved = false;   // solver ran to completion (possibly unconverged)
  bool converged = false;
  std::string error;     // nonempty when the solver failed outright
  SolveResult result;
};

// Solver grid over (k, zeta); failures are recorded, never fatal.
inline std::vector<PanelCell> panel_sweep(const std::vector<double>& ks,
                                          const std::vector<double>& zetas, int n,
                                          double tol = 1e-8, int max_sweeps = 5000) {
  std::vector<PanelCell> cells;
  for (double k : ks) {
    for (double z : zetas) {
      PanelCell cell;
      cell.k = k;
      cell.zeta = z;
      try {
        cell.result = greedy_solve({k, z, n, tol, max_sweeps});
        cell.solved = true;
        cell.converged = cell.result.converged;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

struct PowerTransformResult {
  double Z = 0.0;                    // normalizer of density^k
  std::vector<double> grid;          // target coordinates (both axes)
  Grid2D copula_density;             // implied copula density at the grid
  std::vector<double> x_of_u;        // marginal quantiles of the first axis
  std::vector<double> y_of_v;        // second axis
};

// Raises a positive density on [0,1]^2 to the power k, renormalizes, and
// extracts the copula density of the result via its marginal transforms:
// c(u,v) = f(Fx^-1 u, Fy^-1 v) / (fx(Fx^-1 u) fy(Fy^-1 v)).
inline PowerTransformResult power_transform_copula(
    const std::function<double(double, double)>& density, double k,
    const std::vector<double>& target, const QuadratureRule& rule = default_rule()) {
  PowerTransformResult out;
  out.grid = target;
  auto powk = [&](double x, double y) {
    const double c = density(x, y);
    if (!(c > 0.0)) throw DomainError("power_transform_copula: nonpositive density");
    return std::pow(c, k);
  };
  out.Z = integrate2d(powk, rule);
  const double Z = out.Z;
  auto f = [&](double x, double y) { return powk(x, y) / Z; };
  auto fx = [&](double x) { return integrate([&](double y) { return f(x, y); }, rule); };
  auto fy = [&](double y) { return integrate([&](double x) { return f(x, y); }, rule); };
  auto Fx = [&](double x) { return integrate(fx, rule, 0.0, x); };
  auto Fy = [&](double y) { return integrate(fy, rule, 0.0, y); };
  out.x_of_u.reserve(target.size());
  out.y_of_v.reserve(target.size());
  for (double u : target) out.x_of_u.push_back(invert_monotone(Fx, u, 1e-12));
  for (double v : target) out.y_of_v.push_back(invert_monotone(Fy, v, 1e-12));
  out.copula_density = Grid2D(target, target);
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double x = out.x_of_u[i];
    const double gx = fx(x);
    for (std::size_t j = 0; j < target.size(); ++j) {
      const double y = out.y_of_v[j];
      out.copula_density.at(i, j) = f(x, y) / (gx * fy(y));
    }
  }
  return out;
}

// theta of the constant-r family implied by the scaling relation k zeta Z / 2.
inline double frank_param_from_scaling(double k, double zeta, double Z) {
  if (k == 0.0)
    throw UnsupportedFamilyError("frank_param_from_scaling: k = 0 has no scaling map");
  return k * zeta * Z / 2.0;
}

struct PowerSignature {
  double mean = 0.0;    // average block statistic 4 log-odds(q) / S_q
  double spread = 0.0;  // (max - min) / |mean|
};

// Discrete constant-r check of q proportional to mass^k: if the matrix obeys
// the k-power equation, q's block log odds over its block mass are flat.
inline PowerSignature power_signature(const CheckerboardMatrix& cb, double k) {
  std::vector<double> q(cb.mass.size());
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = std::pow(cb.mass[i], k);
    total += q[i];
  }
  for (auto& x : q) x /= total;
  auto at = [&](int i, int j) { return q[i * cb.n + j]; };
  double lo = 1e300, hi = -1e300, sum = 0.0;
  int count = 0;
  for (int i = 0; i + 1 < cb.n; ++i)
    for (int j = 0; j + 1 < cb.n; ++j) {
      const double S = at(i, j) + at(i, j + 1) + at(i + 1, j) + at(i + 1, j + 1);
      const double stat =
          4.0 * std::log(at(i, j) * at(i + 1, j + 1) / (at(i, j + 1) * at(i + 1, j))) / S;
      lo = std::min(lo, stat);
      hi = std::max(hi, stat);
      sum += stat;
      ++count;
    }
  PowerSignature sig;
  sig.mean = sum / count;
  sig.spread = (hi - lo) / std::abs(sig.mean);
  return sig;
}

}  // namespace cld
