#pragma once

// Release-gate checks: one entry per numbered criterion, each printing a
// single pass/fail line. Shared by the `verify` subcommand and the
// acceptance test binary. Stochastic checks run on pinned seeds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cld/checkerboard.hpp"
#include "cld/estimation.hpp"
#include "cld/grid.hpp"
#include "cld/kendall.hpp"
#include "cld/local_dependence.hpp"

namespace cld::acceptance {

struct Options {
  // Negative-control fixture: additive corruption of the closed-form flat r
  // used by the first criterion; verifies that the gate actually bites.
  double tamper_frank_bias = 0.0;
};

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  std::string id;      // C1..C12
  std::string group;   // local-dep, kendall, estimation, checkerboard
  std::string name;
  double budget_seconds;  // wall-clock ceiling, part of the gate
  std::function<Outcome(const Options&)> run;
};

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Collector {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

}  // namespace detail

// Flat relative local dependence of the constant-r family, closed form and
// finite differences.
inline Outcome check_frank_constancy(const Options& opt) {
  detail::Collector c;
  for (double theta : {-5.0, -1.0, 1.0, 3.0, 8.0}) {
    const auto m = CopulaModel::frank(theta);
    double worst_closed = 0.0, worst_numeric = 0.0;
    for (int i = 1; i <= 50; ++i) {
      for (int j = 1; j <= 50; ++j) {
        const double u = i / 51.0, v = j / 51.0;
        const double closed = relative_local_dependence(m, u, v) + opt.tamper_frank_bias;
        worst_closed = std::max(worst_closed, std::abs(closed - 2.0 * theta));
        const double numeric = relative_local_dependence_numeric(m, u, v);
        worst_numeric = std::max(worst_numeric, std::abs(numeric - 2.0 * theta));
      }
    }
    c.require(worst_closed < 1e-8, "closed-form dev " + detail::num(worst_closed) +
                                       " at theta " + detail::num(theta));
    c.require(worst_numeric < 1e-3, "numeric dev " + detail::num(worst_numeric) +
                                        " at theta " + detail::num(theta));
  }
  if (c.pass) c.detail = "max deviations within 1e-8 closed / 1e-3 numeric";
  return {c.pass, c.detail};
}

// Proportionality constants of the closed forms and their numeric routes.
inline Outcome check_proportionality_relations(const Options&) {
  detail::Collector c;
  const auto grid = interior_grid(9);
  {
    const auto m = CopulaModel::mics(2.0, 64);
    double wc = 0.0, wn = 0.0;
    for (double u : grid)
      for (double v : grid) {
        const double pc = pdf(m, u, v);
        wc = std::max(wc, std::abs(relative_local_dependence(m, u, v) * pc - 2.0));
        wn = std::max(wn, std::abs(local_dependence_numeric(m, u, v) - 2.0));
      }
    c.require(wc < 1e-6, "exp-bilinear closed r*c dev " + detail::num(wc));
    c.require(wn < 1e-2, "exp-bilinear numeric dev " + detail::num(wn));
  }
  {
    const double theta = 2.0;
    const auto m = CopulaModel::clayton(theta);
    const double want = theta * (1 + 2 * theta) / (1 + theta);
    double wc = 0.0, wn = 0.0;
    for (double u : grid)
      for (double v : grid) {
        const double C = cdf(m, u, v);
        wc = std::max(wc, std::abs(relative_local_dependence(m, u, v) * C - want));
        wn = std::max(wn, std::abs(relative_local_dependence_numeric(m, u, v) * C - want));
      }
    c.require(wc < 1e-6, "clayton closed r*C dev " + detail::num(wc));
    c.require(wn < 1e-2, "clayton numeric dev " + detail::num(wn));
  }
  {
    const double theta = 0.7;
    const auto m = CopulaModel::fgm(theta);
    double wc = 0.0, wn = 0.0;
    for (double u : grid)
      for (double v : grid) {
        const double p = pdf(m, u, v);
        const double cube = p * p * p;
        wc = std::max(wc,
                      std::abs(relative_local_dependence(m, u, v) * cube - 4 * theta));
        wn = std::max(wn, std::abs(relative_local_dependence_numeric(m, u, v) * cube -
                                   4 * theta));
      }
    c.require(wc < 1e-6, "fgm closed r*c^3 dev " + detail::num(wc));
    c.require(wn < 1e-2, "fgm numeric dev " + detail::num(wn));
  }
  if (c.pass) c.detail = "all three proportionality constants flat";
  return {c.pass, c.detail};
}

// Margin invariance through normal-quantile transforms.
inline Outcome check_invariance(const Options&) {
  const double d = invariance_max_discrepancy(CopulaModel::frank(3.0), normal_margin(),
                                              normal_margin(), interior_grid(9));
  detail::Collector c;
  c.require(d < 0.01, "max relative discrepancy " + detail::num(d));
  if (c.pass) c.detail = "pushed-forward r within " + detail::num(d) + " of flat 6";
  return {c.pass, c.detail};
}

// Corner-tau fixtures. The quadratic-section fixture comes from a reported
// formula that contradicts the defining integral (see the brute-force
// oracle check); it is asserted as stated and reported honestly.
inline Outcome check_tau_fixtures(const Options&) {
  detail::Collector c;
  const auto clayton = CopulaModel::clayton(5.0);
  for (double p : {0.2, 0.3, 0.5}) {
    const double t = tau_ll(clayton, p, p);
    c.require(std::abs(t - 5.0 / 7.0) < 1e-3,
              "clayton p=" + detail::num(p) + " gave " + detail::num(t));
  }
  const double t_fgm = tau_ll(CopulaModel::fgm(1.0), 0.5, 0.5);
  c.require(std::abs(t_fgm - 2.0 / 9.0) < 1e-4,
            "fgm fixture 2/9 not met: defining integral gives " + detail::num(t_fgm) +
                " (= 8/225; the 4D sign-integral oracle agrees, so the reported "
                "formula, not the implementation, is inconsistent)");
  const auto frank = CopulaModel::frank(3.0);
  const double reduction = std::abs(tau_ll(frank, 1.0, 1.0) - tau_global(frank));
  c.require(reduction < 1e-10, "corner (1,1) vs global dev " + detail::num(reduction));
  if (c.pass) c.detail = "clayton flat at 5/7, full-square reduction exact";
  return {c.pass, c.detail};
}

// Pair-symmetry identity: corner tau against the 4D sign integral.
inline Outcome check_pair_symmetry_oracle(const Options&) {
  struct Case {
    CopulaModel m;
    double p, q;
    bool graded;
  };
  const Case cases[] = {{CopulaModel::independence(), 0.5, 0.5, false},
                        {CopulaModel::frank(3.0), 0.7, 0.7, false},
                        {CopulaModel::frank(-2.0), 0.4, 0.7, false},
                        {CopulaModel::fgm(1.0), 0.5, 0.5, false},
                        {CopulaModel::clayton(2.0), 0.5, 0.5, false},
                        {CopulaModel::clayton(5.0), 0.3, 0.3, true}};
  detail::Collector c;
  double worst = 0.0;
  for (const auto& cs : cases) {
    const double direct = tau_ll(cs.m, cs.p, cs.q);
    const double brute =
        cs.graded
            ? tau_ll_bruteforce(cs.m, cs.p, cs.q,
                                composite_with_breaks(gauss_legendre(8),
                                                      {0, 1.0 / 64, 1.0 / 16, 0.25, 1.0}))
            : tau_ll_bruteforce(cs.m, cs.p, cs.q);
    worst = std::max(worst, std::abs(direct - brute));
    c.require(std::abs(direct - brute) < 5e-3,
              std::string(family_name(cs.m.family())) + " dev " +
                  detail::num(std::abs(direct - brute)));
  }
  if (c.pass) c.detail = "six cases agree within " + detail::num(worst);
  return {c.pass, c.detail};
}

// Shrinking-square behaviour of the rectangular taus.
inline Outcome check_shrinking_squares(const Options&) {
  detail::Collector c;
  const auto frank = CopulaModel::frank(3.0);
  {
    const std::vector<double> eps = {0.16, 0.08, 0.04, 0.02};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double e : eps) {
      const double t = tau_rect_naive(frank, RectRegion(0.5, 0.5 + e, 0.5, 0.5 + e));
      const double x = std::log(e), y = std::log(std::abs(t));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = 4.0;
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    c.require(slope > 1.9 && slope < 2.1, "naive eps-slope " + detail::num(slope));
  }
  auto richardson = [&](const CopulaModel& m, double e) {
    const double t1 = tau_rect_modified(m, RectRegion(0.5, 0.5 + e, 0.5, 0.5 + e));
    const double t2 = tau_rect_modified(m, RectRegion(0.5, 0.5 + e / 2, 0.5, 0.5 + e / 2));
    return 2.0 * t2 - t1;
  };
  {
    const double lim = richardson(frank, 0.08);
    c.require(std::abs(lim - 1.0 / 3.0) / (1.0 / 3.0) < 0.02,
              "frank modified limit " + detail::num(lim) + " vs 1/3");
  }
  {
    const auto fgm = CopulaModel::fgm(1.0);
    const double want = relative_local_dependence(fgm, 0.5, 0.5) / 18.0;
    const double lim = richardson(fgm, 0.08);
    c.require(std::abs(lim - want) / want < 0.02,
              "fgm modified limit " + detail::num(lim) + " vs " + detail::num(want));
  }
  if (c.pass) c.detail = "slope in [1.9,2.1]; extrapolated limits within 2%";
  return {c.pass, c.detail};
}

// Estimator error study on pinned seeds: ordering, monotonicity, and the
// absolute scale windows.
inline Outcome check_estimation_ordering(const Options&) {
  detail::Collector c;
  const auto grid = stepped_grid(0.15, 0.1, 9);
  struct Row {
    const char* name;
    CopulaModel m;
    double paper_naive_1k, paper_naive_10k, paper_lf_1k, paper_lf_10k;
  };
  const Row rows[] = {{"frank3", CopulaModel::frank(3.0), 22.16, 18.91, 14.58, 5.57},
                      {"clayton5", CopulaModel::clayton(5.0), 111.1, 74.60, 32.27, 19.51}};
  for (const auto& row : rows) {
    auto truth = [&](double x, double y) {
      return relative_local_dependence(row.m, x, y);
    };
    double e_naive[2], e_lf[2];
    int k = 0;
    for (std::size_t n : {std::size_t(1000), std::size_t(10000)}) {
      const auto s = sample(row.m, n, RngStream(41, 0));
      const auto rep = estimate_grid(s, grid, default_kernel_config(n), true);
      e_naive[k] = error_metric(rep, RMethod::naive, truth);
      e_lf[k] = error_metric(rep, RMethod::local_frank, truth);
      ++k;
    }
    c.require(e_lf[0] < e_naive[0], std::string(row.name) + " 1k: lf !< naive");
    c.require(e_lf[1] < e_naive[1], std::string(row.name) + " 10k: lf !< naive");
    c.require(e_naive[1] < e_naive[0], std::string(row.name) + " naive not shrinking");
    c.require(e_lf[1] < e_lf[0], std::string(row.name) + " lf not shrinking");
    const double targets[4] = {row.paper_naive_1k, row.paper_naive_10k, row.paper_lf_1k,
                               row.paper_lf_10k};
    const double got[4] = {e_naive[0], e_naive[1], e_lf[0], e_lf[1]};
    const char* cell[4] = {"naive 1k", "naive 10k", "lf 1k", "lf 10k"};
    for (int j = 0; j < 4; ++j) {
      const double f = got[j] / targets[j];
      c.require(f < 3.0 && f > 1.0 / 3.0, std::string(row.name) + " " + cell[j] + " = " +
                                              detail::num(got[j]) + " is " +
                                              detail::num(f) + "x the reported scale");
    }
  }
  if (c.pass) c.detail = "ordering, monotonicity, and scale windows all hold";
  return {c.pass, c.detail};
}

// Downward bias of the naive relative estimator on flat-r data.
inline Outcome check_naive_bias(const Options&) {
  const auto s = sample(CopulaModel::frank(3.0), 10000, RngStream(41, 0));
  const auto rep =
      estimate_grid(s, stepped_grid(0.15, 0.1, 9), default_kernel_config(10000), false);
  double mean = 0.0;
  int cnt = 0;
  for (const auto& p : rep.points)
    if (p.label != PointLabel::low_density && p.r_hat) {
      mean += *p.r_hat;
      ++cnt;
    }
  mean /= cnt;
  detail::Collector c;
  c.require(mean < 6.0, "grid mean " + detail::num(mean) + " not below 6");
  if (c.pass) c.detail = "grid-mean naive estimate " + detail::num(mean) + " < 6";
  return {c.pass, c.detail};
}

// Greedy block solver invariants and the iterative-fitting oracle.
inline Outcome check_greedy_solver(const Options&) {
  detail::Collector c;
  {
    const auto res = greedy_solve({1.0, 0.0, 5, 1e-8, 100});
    c.require(res.converged && res.sweeps == 0, "zero-tilt fixed point not immediate");
    double dev = 0.0;
    for (double m : res.matrix.mass) dev = std::max(dev, std::abs(m - 0.04));
    c.require(dev < 1e-14, "zero-tilt matrix not uniform");
  }
  for (int n : {8, 16}) {
    const auto res = greedy_solve({0.0, 2.0, n, 1e-8, 200000});
    c.require(res.converged, "n=" + std::to_string(n) + " failed to converge");
    c.require(res.max_residual <= 1e-8,
              "n=" + std::to_string(n) + " residual " + detail::num(res.max_residual));
    const auto oracle = mics_density(2.0, n);
    double sup = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        sup = std::max(sup, std::abs(res.matrix.at(i, j) - oracle.mass[i * n + j]));
    c.require(sup < 1e-6, "n=" + std::to_string(n) + " vs fitting oracle sup " +
                              detail::num(sup));
    double margin = 0.0;
    for (int i = 0; i < n; ++i) {
      margin = std::max(margin, std::abs(res.matrix.row_sum(i) - 1.0 / n));
      margin = std::max(margin, std::abs(res.matrix.col_sum(i) - 1.0 / n));
    }
    c.require(margin < 1e-12, "n=" + std::to_string(n) + " margin drift " +
                                  detail::num(margin));
  }
  // Margins hold after every sweep, observed at several stopping points.
  for (int sweeps : {1, 2, 10}) {
    const auto res = greedy_solve({0.0, 2.0, 8, 1e-30, sweeps});
    double margin = 0.0;
    for (int i = 0; i < 8; ++i) {
      margin = std::max(margin, std::abs(res.matrix.row_sum(i) - 0.125));
      margin = std::max(margin, std::abs(res.matrix.col_sum(i) - 0.125));
    }
    c.require(margin < 1e-12,
              "margins drift " + detail::num(margin) + " after sweep " +
                  std::to_string(sweeps));
  }
  if (c.pass) c.detail = "fixed point, oracle match, margins, residual certificate";
  return {c.pass, c.detail};
}

// Inverse-square power transform onto the constant-r family.
inline Outcome check_power_transform(const Options&) {
  detail::Collector c;
  std::vector<double> target;
  for (int i = 1; i <= 33; ++i) target.push_back(i / 34.0);
  for (double theta : {0.3, 0.5, 0.8}) {
    const auto m = CopulaModel::fgm(theta);
    const auto pt = power_transform_copula(
        [&](double x, double y) { return pdf(m, x, y); }, -2.0, target);
    const double z_want = std::log((1 + theta) / (1 - theta)) / (2 * theta);
    c.require(std::abs(pt.Z - z_want) < 1e-8,
              "theta=" + detail::num(theta) + " Z dev " +
                  detail::num(std::abs(pt.Z - z_want)));
    const auto frank = CopulaModel::frank(-2.0 * std::log((1 + theta) / (1 - theta)));
    double sup = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i)
      for (std::size_t j = 0; j < target.size(); ++j)
        sup = std::max(sup, std::abs(pt.copula_density.at(i, j) -
                                     pdf(frank, target[i], target[j])));
    c.require(sup < 1e-3, "theta=" + detail::num(theta) + " implied-density sup " +
                              detail::num(sup));
  }
  if (c.pass) c.detail = "normalizers exact, implied densities match the map";
  return {c.pass, c.detail};
}

// Diagonal tail rates of the inverse-power family.
inline Outcome check_tail_rates(const Options&) {
  detail::Collector c;
  for (double theta : {1.0, 2.0}) {
    const auto m = CopulaModel::clayton(theta);
    const auto tr = tail_rate(m);
    const double want = theta * (1 + 2 * theta) / (1 + theta) * std::pow(2.0, 1.0 / theta);
    c.require(std::abs(tr.constant - want) / want < 0.02,
              "theta=" + detail::num(theta) + " u*r " + detail::num(tr.constant) +
                  " vs " + detail::num(want));
    c.require(std::abs(tr.slope + 1.0) < 0.05,
              "theta=" + detail::num(theta) + " slope " + detail::num(tr.slope));
    const auto td = lower_tail_dependence(m);
    const double lam = std::pow(2.0, -1.0 / theta);
    c.require(std::abs(td.lambda - lam) / lam < 0.01,
              "theta=" + detail::num(theta) + " lambda " + detail::num(td.lambda));
  }
  if (c.pass) c.detail = "u^-1 rate, limit constants, and tail coefficients hold";
  return {c.pass, c.detail};
}

// Dependence-map structure on pinned seeds.
inline Outcome check_dependence_maps(const Options&) {
  detail::Collector c;
  const auto grid = stepped_grid(0.15, 0.1, 9);
  {
    const auto sc = simulate_parabola(250, RngStream(1, 0));
    const auto rep = dependence_map(sc.ranks, grid, default_kernel_config(250), 200, 0.05,
                                    RngStream(1, 100));
    int pos_left = 0, neg_left = 0, pos_right = 0, neg_right = 0;
    for (const auto& p : rep.points) {
      if (p.label == PointLabel::positive) (p.x < 0.5 ? pos_left : pos_right)++;
      if (p.label == PointLabel::negative) (p.x < 0.5 ? neg_left : neg_right)++;
    }
    c.require(neg_left > pos_left && neg_left > 0, "left half not negative");
    c.require(pos_right > neg_right && pos_right > 0, "right half not positive");
  }
  {
    const auto s = sample(CopulaModel::frank(5.0), 250, RngStream(1, 0));
    const auto rep =
        dependence_map(s, grid, default_kernel_config(250), 200, 0.05, RngStream(1, 100));
    int pos = 0, unmasked = 0;
    for (const auto& p : rep.points)
      if (p.label != PointLabel::low_density) {
        ++unmasked;
        pos += p.label == PointLabel::positive;
      }
    c.require(pos * 2 > unmasked, "strong-dependence map not majority positive");
  }
  {
    const auto s = sample(CopulaModel::independence(), 250, RngStream(4, 0));
    const auto rep =
        dependence_map(s, grid, default_kernel_config(250), 200, 0.05, RngStream(4, 100));
    int neu = 0, unmasked = 0;
    for (const auto& p : rep.points)
      if (p.label != PointLabel::low_density) {
        ++unmasked;
        neu += p.label == PointLabel::neutral;
      }
    c.require(neu * 10 >= unmasked * 8, "null map only " + std::to_string(neu) + "/" +
                                            std::to_string(unmasked) + " neutral");
  }
  if (c.pass) c.detail = "sign split, positive bulk, and null calibration hold";
  return {c.pass, c.detail};
}

inline std::vector<Check> all_checks() {
  return {
      {"C1", "local-dep", "frank-constancy", 5, check_frank_constancy},
      {"C2", "local-dep", "proportionality-relations", 10, check_proportionality_relations},
      {"C3", "local-dep", "margin-invariance", 5, check_invariance},
      {"C4", "kendall", "corner-tau-fixtures", 10, check_tau_fixtures},
      {"C5", "kendall", "pair-symmetry-oracle", 60, check_pair_symmetry_oracle},
      {"C6", "kendall", "shrinking-squares", 30, check_shrinking_squares},
      {"C7", "estimation", "error-study", 600, check_estimation_ordering},
      {"C8", "estimation", "naive-bias-direction", 600, check_naive_bias},
      {"C9", "checkerboard", "greedy-solver", 30, check_greedy_solver},
      {"C10", "checkerboard", "power-transform", 60, check_power_transform},
      {"C11", "local-dep", "tail-rates", 5, check_tail_rates},
      {"C12", "estimation", "dependence-maps", 120, check_dependence_maps},
  };
}

// Runs the selected checks, printing one line each; returns the number of
// failures. `only` filters by id, group, or name (empty = everything).
inline int run(std::ostream& os, const Options& opt = {},
               const std::vector<std::string>& only = {}) {
  int failures = 0;
  int ran = 0;
  for (const auto& chk : all_checks()) {
    if (!only.empty()) {
      bool wanted = false;
      for (const auto& key : only)
        if (key == chk.id || key == chk.group || key == chk.name) wanted = true;
      if (!wanted) continue;
    }
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = chk.run(opt);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.pass && secs > chk.budget_seconds) {
      out.pass = false;
      out.detail = "over the " + detail::num(chk.budget_seconds) + "s budget";
    }
    char line[512];
    std::snprintf(line, sizeof line, "%-4s %-4s %-26s %s  [%.1fs]", chk.id.c_str(),
                  out.pass ? "PASS" : "FAIL", chk.name.c_str(), out.detail.c_str(), secs);
    os << line << "\n";
    if (!out.pass) ++failures;
  }
  if (ran == 0) {
    os << "no checks matched the filter\n";
    return 1;
  }
  os << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
     << " (" << ran - failures << "/" << ran << ")\n";
  return failures;
}

}  // namespace cld::acceptance
