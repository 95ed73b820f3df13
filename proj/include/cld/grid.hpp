#pragma once

// Rectangular lattice of scalar values over [0,1]^2 with axis coordinates.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cld {

struct Grid2D {
  std::vector<double> x;       // axis coordinates, strictly increasing
  std::vector<double> y;
  std::vector<double> values;  // row-major: values[i * y.size() + j] at (x[i], y[j])

  Grid2D() = default;
  Grid2D(std::vector<double> xs, std::vector<double> ys)
      : x(std::move(xs)), y(std::move(ys)), values(x.size() * y.size(), 0.0) {}

  double& at(std::size_t i, std::size_t j) { return values[i * y.size() + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * y.size() + j]; }
  std::size_t nx() const { return x.size(); }
  std::size_t ny() const { return y.size(); }
};

// Equally spaced interior coordinates k/(n+1), k = 1..n.
inline std::vector<double> interior_grid(int n) {
  if (n < 1) throw std::invalid_argument("interior_grid: n must be >= 1");
  std::vector<double> g(n);
  for (int k = 1; k <= n; ++k) g[k - 1] = static_cast<double>(k) / (n + 1);
  return g;
}

// Coordinates start, start+step, ... (count values).
inline std::vector<double> stepped_grid(double start, double step, int count) {
  std::vector<double> g(count);
  for (int k = 0; k < count; ++k) g[k] = start + step * k;
  return g;
}

}  // namespace cld
