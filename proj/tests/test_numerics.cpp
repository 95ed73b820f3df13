#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cld/copula.hpp"
#include "cld/finite_diff.hpp"
#include "cld/normal.hpp"
#include "cld/quadrature.hpp"
#include "cld/rng.hpp"
#include "cld/roots.hpp"

using namespace cld;

TEST_CASE("gauss_legendre order 1 is the midpoint rule") {
  const auto r = gauss_legendre(1);
  REQUIRE(r.nodes.size() == 1);
  CHECK(r.nodes[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("gauss_legendre rejects order 0") {
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("quadrature integrates monomials exactly up to degree 2n-1") {
  // Exactness oracle: integral of u^d over [0,1] is 1/(d+1).
  for (int order : {2, 5, 8, 16, 32}) {
    const auto r = gauss_legendre(order);
    double wsum = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 1; i < r.nodes.size(); ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
    for (int d = 0; d <= 2 * order - 1; ++d) {
      const double got = integrate([d](double u) { return std::pow(u, d); }, r);
      CHECK(std::abs(got - 1.0 / (d + 1)) < 1e-12);
    }
  }
}

TEST_CASE("integral of u over [0,1] with order 5") {
  const auto r = gauss_legendre(5);
  CHECK(std::abs(integrate([](double u) { return u; }, r) - 0.5) < 1e-14);
}

TEST_CASE("biweight second moment over [-1,1] equals 1/7") {
  // Closed-form antiderivative: (15/16) * (2/3 - 4/5 + 2/7) = 1/7.
  const auto r = gauss_legendre(5);
  const double got = integrate(
      [](double u) { return u * u * (15.0 / 16.0) * (1 - u * u) * (1 - u * u); }, r,
      -1.0, 1.0);
  CHECK(got == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("composite rule partitions [0,1] and keeps exactness per panel") {
  const auto r = composite(gauss_legendre(8), 4);
  REQUIRE(r.nodes.size() == 32);
  double wsum = 0.0;
  for (double w : r.weights) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  const double got = integrate([](double u) { return std::exp(u); }, r);
  CHECK(got == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("integrate2d separates products") {
  const auto r = gauss_legendre(16);
  const double got =
      integrate2d([](double x, double y) { return x * y * y; }, r, 0, 1, 0, 1);
  CHECK(got == doctest::Approx(0.5 / 3.0).epsilon(1e-13));
}

TEST_CASE("mixed_partial_log of a constant is zero") {
  const double got = mixed_partial_log([](double, double) { return 1.0; }, 0.4, 0.7, 1e-4);
  CHECK(std::abs(got) < 1e-10);
}

TEST_CASE("mixed_partial_log recovers the bilinear coefficient of exp(theta u v)") {
  const double theta = 2.0;
  auto f = [theta](double u, double v) { return std::exp(theta * u * v); };
  for (double u : {0.2, 0.5, 0.8})
    for (double v : {0.3, 0.6}) {
      CHECK(mixed_partial_log(f, u, v, 1e-4) == doctest::Approx(theta).epsilon(1e-7));
    }
}

TEST_CASE("mixed_partial_log is exact when log f is bilinear") {
  // The 4-point stencil reproduces the bilinear coefficient with no h^2 term,
  // so exp(theta u v) comes out exact for any step.
  const double theta = 3.0;
  auto f = [theta](double u, double v) { return std::exp(theta * u * v); };
  for (double h : {0.05, 0.01, 1e-3, 1e-4})
    CHECK(std::abs(mixed_partial_log(f, 0.4, 0.6, h) - theta) < 1e-8);
}

TEST_CASE("mixed_partial_log error decays at second order") {
  // Non-bilinear log: halving h must cut the error by at least 3.5x.
  auto f = [](double u, double v) { return std::exp(3.0 * u * v + u * u * u * v * v); };
  const double u = 0.4, v = 0.6;
  const double truth = 3.0 + 6.0 * u * u * v;  // d2/dudv of the exponent
  const double e1 = std::abs(mixed_partial_log(f, u, v, 0.05) - truth);
  const double e2 = std::abs(mixed_partial_log(f, u, v, 0.025) - truth);
  CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("mixed_partial_log matches the Frank closed form") {
  // Oracle: the Frank copula's log-density curvature is 2 theta c(u,v).
  const auto m = CopulaModel::frank(3.0);
  auto f = [&](double u, double v) { return pdf(m, u, v); };
  const double got = mixed_partial_log(f, 0.5, 0.5, 1e-3);
  const double want = 6.0 * pdf(m, 0.5, 0.5);
  CHECK(std::abs(got - want) / want < 1e-4);
}

TEST_CASE("mixed_partial_log rejects stencils leaving the unit square") {
  auto one = [](double, double) { return 1.0; };
  CHECK_THROWS_AS(mixed_partial_log(one, 1e-5, 0.5, 1e-4), DomainError);
  CHECK_THROWS_AS(mixed_partial_log(one, 0.5, 0.999999, 1e-4), DomainError);
}

TEST_CASE("mixed_partial_log rejects nonpositive values") {
  auto f = [](double u, double v) { return u + v - 0.9; };
  CHECK_THROWS_AS(mixed_partial_log(f, 0.45, 0.45, 1e-1), DomainError);
}

TEST_CASE("solve_quadratic") {
  CHECK(solve_quadratic(1, -3, 2) == std::vector<double>{1.0, 2.0});
  CHECK(solve_quadratic(0, 2, -1) == std::vector<double>{0.5});
  CHECK(solve_quadratic(1, 0, 1).empty());
  CHECK_THROWS_AS(solve_quadratic(0, 0, 1), std::invalid_argument);
  // Double root collapses.
  const auto r = solve_quadratic(1, -2, 1);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(1.0));
}

TEST_CASE("invert_monotone") {
  CHECK(invert_monotone([](double x) { return x; }, 0.3, 1e-12) ==
        doctest::Approx(0.3).epsilon(1e-10));
  CHECK(invert_monotone([](double x) { return x * x; }, 0.25, 1e-12) ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(invert_monotone([](double x) { return x; }, 1.5, 1e-12), DomainError);
}

TEST_CASE("invert_monotone solves a Frank conditional and re-applies") {
  const auto m = CopulaModel::frank(3.0);
  auto f = [&](double v) { return conditional_cdf(m, v, 0.5); };
  const double vstar = invert_monotone(f, 0.5, 1e-12);
  CHECK(std::abs(f(vstar) - 0.5) <= 1e-12);
}

TEST_CASE("normal quantile inverts the normal cdf") {
  for (double p : {1e-9, 1e-4, 0.025, 0.31830988618, 0.5, 0.841, 0.999, 1 - 1e-9}) {
    const double x = normal_quantile(p);
    CHECK(std::abs(normal_cdf(x) - p) < 1e-9 * std::max(p, 1.0 - p) + 1e-15);
  }
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
}

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, 0), b(42, 0), c(42, 1);
  std::vector<std::uint64_t> xa, xb, xc;
  for (int i = 0; i < 100; ++i) {
    xa.push_back(a.next_u64());
    xb.push_back(b.next_u64());
    xc.push_back(c.next_u64());
  }
  CHECK(xa == xb);
  CHECK(xa != xc);
}

TEST_CASE("rng doubles stay inside the open unit interval") {
  RngStream r(7, 3);
  for (int i = 0; i < 10000; ++i) {
    const double x = r.next_double();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("quadrature exactness on random polynomials") {
  // Property: a degree-d polynomial with random coefficients integrates to
  // its symbolic value whenever d <= 2*order-1.
  RngStream rng(2024, 0);
  for (int order : {4, 9, 16}) {
    const auto rule = gauss_legendre(order);
    for (int rep = 0; rep < 20; ++rep) {
      const int d = 2 * order - 1;
      std::vector<double> coef(d + 1);
      double want = 0.0;
      for (int k = 0; k <= d; ++k) {
        coef[k] = 2.0 * rng.next_double() - 1.0;
        want += coef[k] / (k + 1);
      }
      auto poly = [&](double x) {
        double acc = 0.0;
        for (int k = d; k >= 0; --k) acc = acc * x + coef[k];
        return acc;
      };
      CHECK(std::abs(integrate(poly, rule) - want) < 1e-12);
    }
  }
}
