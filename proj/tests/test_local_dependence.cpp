#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cld/grid.hpp"
#include "cld/local_dependence.hpp"

using namespace cld;

TEST_CASE("independence has zero local dependence") {
  const auto m = CopulaModel::independence();
  for (double u : {0.1, 0.5, 0.9})
    for (double v : {0.2, 0.7}) {
      CHECK(local_dependence(m, u, v) == 0.0);
      CHECK(relative_local_dependence(m, u, v) == 0.0);
      CHECK(std::abs(local_dependence_numeric(m, u, v)) < 1e-9);
    }
}

TEST_CASE("exponential-bilinear family has constant local dependence theta") {
  const auto m = CopulaModel::mics(2.5, 64);
  for (double u : {0.15, 0.5, 0.85})
    for (double v : {0.3, 0.6}) {
      CHECK(local_dependence(m, u, v) == doctest::Approx(2.5));
      CHECK(local_dependence_numeric(m, u, v) == doctest::Approx(2.5).epsilon(1e-9));
    }
}

TEST_CASE("gaussian local dependence at the median") {
  // rho/(1-rho^2) divided by phi(0)^2 = 2 pi rho/(1-rho^2).
  const auto m = CopulaModel::gaussian(0.5);
  CHECK(local_dependence(m, 0.5, 0.5) ==
        doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-12));
}

TEST_CASE("frank relative local dependence is the constant 2 theta") {
  const auto m = CopulaModel::frank(3.0);
  for (double u : {0.1, 0.37, 0.62, 0.9})
    for (double v : {0.25, 0.5, 0.8})
      CHECK(relative_local_dependence(m, u, v) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("fgm diagonal r approaches 4 theta/(1+theta)^3 at both corners") {
  const auto m = CopulaModel::fgm(1.0);
  CHECK(relative_local_dependence(m, 1e-9, 1e-9) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(relative_local_dependence(m, 1.0 - 1e-9, 1.0 - 1e-9) ==
        doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("clayton r equals its closed constant over the cdf") {
  // theta = 1: (1*3/2)/C; at the top corner C(1,1) = 1.
  const auto m = CopulaModel::clayton(1.0);
  CHECK(relative_local_dependence(m, 1.0, 1.0) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("generator route fixtures") {
  CHECK(archimedean_r_from_generator(frank_generator(3.0), 0.3, 0.8) ==
        doctest::Approx(6.0).epsilon(1e-10));
  // Clayton(2) at (0.5,0.5): (10/3) / C = (10/3) sqrt(7).
  CHECK(archimedean_r_from_generator(clayton_generator(2.0), 0.5, 0.5) ==
        doctest::Approx(10.0 / 3.0 * std::sqrt(7.0)).epsilon(1e-10));
  // theta = 1 collapses Gumbel-Hougaard to independence: log psi'' is linear.
  CHECK(std::abs(archimedean_r_from_generator(gumbel_hougaard_generator(1.0), 0.5, 0.5)) <
        1e-12);
}

TEST_CASE("exponent-form route fixtures") {
  CHECK(exponent_form_r(clayton_generator(2.0), 0.5, 0.5) ==
        doctest::Approx(archimedean_r_from_generator(clayton_generator(2.0), 0.5, 0.5))
            .epsilon(1e-10));
  CHECK(exponent_form_r(frank_generator(3.0), 0.2, 0.9) == doctest::Approx(6.0).epsilon(1e-10));
  const auto m = CopulaModel::gumbel_hougaard(2.0);
  const double via_a = exponent_form_r(generator(m), 0.5, 0.5);
  const double numeric = relative_local_dependence_numeric(m, 0.5, 0.5);
  CHECK(via_a == doctest::Approx(numeric).epsilon(1e-3));
}

TEST_CASE("route equivalence across the Archimedean families") {
  // Closed form, generator route, exponent route, and the finite-difference
  // route must agree pairwise on an interior grid.
  for (const auto& m : {CopulaModel::frank(3.0), CopulaModel::frank(-2.0),
                        CopulaModel::clayton(1.5), CopulaModel::gumbel_hougaard(2.0),
                        CopulaModel::ali_mikhail_haq(0.6)}) {
    const auto b = generator(m);
    for (double u = 0.1; u < 0.95; u += 0.1) {
      for (double v = 0.1; v < 0.95; v += 0.1) {
        const double closed = relative_local_dependence(m, u, v);
        const double via_gen = archimedean_r_from_generator(b, u, v);
        const double via_a = exponent_form_r(b, u, v);
        const double numeric = relative_local_dependence_numeric(m, u, v);
        const double scale = std::max(std::abs(closed), 1e-9);
        CHECK(std::abs(via_gen - closed) / scale < 1e-8);
        CHECK(std::abs(via_a - closed) / scale < 1e-6);
        CHECK(std::abs(numeric - closed) / scale < 1e-3);
      }
    }
  }
}

TEST_CASE("numeric route agrees with closed forms outside the Archimedean class") {
  for (const auto& m :
       {CopulaModel::gaussian(0.5), CopulaModel::gaussian(-0.3), CopulaModel::fgm(0.8)}) {
    for (double u : {0.3, 0.5, 0.7})
      for (double v : {0.4, 0.6}) {
        const double closed = relative_local_dependence(m, u, v);
        const double numeric = relative_local_dependence_numeric(m, u, v);
        CHECK(std::abs(numeric - closed) / std::max(std::abs(closed), 1e-9) < 1e-3);
      }
  }
}

TEST_CASE("frank constancy across parameters on a dense grid") {
  for (double theta : {-5.0, -1.0, 1.0, 3.0, 8.0}) {
    const auto m = CopulaModel::frank(theta);
    double lo = 1e300, hi = -1e300;
    for (int i = 1; i <= 50; ++i) {
      for (int j = 1; j <= 50; ++j) {
        const double r = relative_local_dependence(m, i / 51.0, j / 51.0);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
    CHECK(hi - lo < 1e-8);
    CHECK(hi == doctest::Approx(2.0 * theta).epsilon(1e-12));
  }
}

TEST_CASE("proportionality constants from the closed forms stay flat") {
  const auto grid = interior_grid(9);
  // r * c for the exponential-bilinear family.
  {
    const auto m = CopulaModel::mics(2.0, 64);
    for (double u : grid)
      for (double v : grid)
        CHECK(std::abs(relative_local_dependence(m, u, v) * pdf(m, u, v) - 2.0) < 1e-6);
  }
  // r * C for Clayton.
  {
    const double theta = 2.0;
    const auto m = CopulaModel::clayton(theta);
    const double want = theta * (1.0 + 2.0 * theta) / (1.0 + theta);
    for (double u : grid)
      for (double v : grid)
        CHECK(std::abs(relative_local_dependence(m, u, v) * cdf(m, u, v) - want) < 1e-6);
  }
  // r * c^3 for FGM.
  {
    const double theta = 0.7;
    const auto m = CopulaModel::fgm(theta);
    for (double u : grid)
      for (double v : grid) {
        const double c = pdf(m, u, v);
        CHECK(std::abs(relative_local_dependence(m, u, v) * c * c * c - 4.0 * theta) <
              1e-6);
      }
  }
}

TEST_CASE("positive parameters give positive r everywhere inside") {
  const auto grid = interior_grid(9);
  for (const auto& m : {CopulaModel::frank(3.0), CopulaModel::clayton(2.0),
                        CopulaModel::fgm(0.5), CopulaModel::mics(1.5, 32)}) {
    for (double u : grid)
      for (double v : grid) CHECK(relative_local_dependence(m, u, v) > 0.0);
  }
}

TEST_CASE("boundary points are rejected by the local dependence routes") {
  const auto m = CopulaModel::frank(3.0);
  CHECK_THROWS_AS(local_dependence(m, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(local_dependence(m, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(local_dependence_numeric(m, 1.0, 0.5), DomainError);
}

TEST_CASE("diagonal profile fixtures") {
  // FGM: r(u,u) = 4 theta / (1 + theta (2u-1)^2)^3.
  {
    const double theta = 0.5;
    const auto m = CopulaModel::fgm(theta);
    const auto prof = diagonal_profile(m, ProfileKind::relative, interior_grid(19));
    for (std::size_t k = 0; k < prof.coordinates.size(); ++k) {
      const double u = prof.coordinates[k];
      const double s = (2.0 * u - 1.0) * (2.0 * u - 1.0);
      const double want = 4.0 * theta / std::pow(1.0 + theta * s, 3.0);
      CHECK(std::abs(prof.values[k] - want) < 1e-10);
    }
    CHECK(prof.values[9] == doctest::Approx(2.0).epsilon(1e-12));  // u = 0.5
  }
  // Frank: flat diagonal.
  {
    const auto prof = diagonal_profile(CopulaModel::frank(3.0), ProfileKind::relative,
                                       interior_grid(49));
    double lo = 1e300, hi = -1e300;
    for (double r : prof.values) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi - lo < 1e-9);
  }
  // FGM theta = 1 peaks at the centre.
  {
    const auto prof = diagonal_profile(CopulaModel::fgm(1.0), ProfileKind::relative,
                                       interior_grid(19));
    const double centre = prof.values[9];
    for (std::size_t k = 0; k < prof.values.size(); ++k)
      if (k != 9) CHECK(prof.values[k] < centre);
  }
}

TEST_CASE("clayton tail rate") {
  // u r(u,u) -> theta(1+2 theta)/(1+theta) 2^(1/theta) as u -> 0.
  {
    const auto tr = tail_rate(CopulaModel::clayton(1.0));
    CHECK_FALSE(tr.truncated);
    CHECK(std::abs(tr.constant - 3.0) / 3.0 < 0.02);
  }
  {
    const auto tr = tail_rate(CopulaModel::clayton(2.0));
    CHECK(tr.slope == doctest::Approx(-1.0).epsilon(0.05));
  }
  {
    const auto tr = tail_rate(CopulaModel::frank(3.0));
    CHECK(std::abs(tr.slope) < 0.01);
  }
}

TEST_CASE("lower tail dependence") {
  CHECK(lower_tail_dependence(CopulaModel::clayton(1.0)).lambda ==
        doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(lower_tail_dependence(CopulaModel::fgm(1.0)).lambda) < 1e-3);
  CHECK(std::abs(lower_tail_dependence(CopulaModel::independence()).lambda) < 1e-3);
}

TEST_CASE("identity margins leave r unchanged") {
  const double d = invariance_max_discrepancy(CopulaModel::frank(3.0), identity_margin(),
                                              identity_margin(), interior_grid(9));
  CHECK(d < 1e-6);
}

TEST_CASE("normal-quantile margins leave r unchanged") {
  const double d = invariance_max_discrepancy(CopulaModel::frank(3.0), normal_margin(),
                                              normal_margin(), interior_grid(9));
  CHECK(d < 1e-2);
}

TEST_CASE("plain local dependence is not margin invariant") {
  // On the pushed-forward density, i transforms by the margin densities:
  // i_f(x,y) = i_c(G1 x, G2 y) g1(x) g2(y).
  const auto m = CopulaModel::frank(3.0);
  const auto g = normal_margin();
  auto f = [&](double x, double y) {
    return g.density(x) * g.density(y) * pdf(m, g.cdf(x), g.cdf(y));
  };
  for (double u : {0.3, 0.5, 0.7}) {
    for (double v : {0.4, 0.6}) {
      const double x = g.quantile(u), y = g.quantile(v);
      const double i_f = mixed_partial_log_free(f, x, y, 1e-4);
      const double i_c = local_dependence(m, u, v);
      const double want = i_c * g.density(x) * g.density(y);
      CHECK(i_f == doctest::Approx(want).epsilon(1e-3));
      if (std::abs(u - 0.5) > 1e-9 || std::abs(v - 0.5) > 1e-9)
        CHECK(std::abs(i_f - i_c) > 1e-3 * std::abs(i_c));
    }
  }
}
