// Command-line front end: every capability as a reproducible, file-emitting
// subcommand. Numbers are serialized with 17 significant digits; every JSON
// output embeds the effective configuration, defaults included.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cld/acceptance.hpp"
#include "cld/checkerboard.hpp"
#include "cld/copula.hpp"
#include "cld/estimation.hpp"
#include "cld/grid.hpp"
#include "cld/io.hpp"
#include "cld/kendall.hpp"
#include "cld/local_dependence.hpp"

using nlohmann::json;
using namespace cld;

namespace {

struct ModelOpts {
  std::string family;
  double theta = 0.0;
  bool theta_set = false;
  double rho = 0.0;
  bool rho_set = false;
  int resolution = 64;
};

void add_model_options(CLI::App* cmd, ModelOpts& mo) {
  cmd->add_option("--family", mo.family,
                  "independence|frank|clayton|gumbel|amh|fgm|gaussian|mics")
      ->required();
  auto* t = cmd->add_option("--theta", mo.theta, "family parameter");
  auto* r = cmd->add_option("--rho", mo.rho, "gaussian correlation");
  cmd->add_option("--resolution", mo.resolution, "mics grid resolution")
      ->capture_default_str();
  cmd->callback([&mo, t, r]() {
    mo.theta_set = t->count() > 0;
    mo.rho_set = r->count() > 0;
  });
}

CopulaModel build_model(const ModelOpts& mo) {
  if (mo.family == "independence") return CopulaModel::independence();
  if (mo.family == "frank") return CopulaModel::frank(mo.theta);
  if (mo.family == "clayton") return CopulaModel::clayton(mo.theta);
  if (mo.family == "gumbel") return CopulaModel::gumbel_hougaard(mo.theta);
  if (mo.family == "amh") return CopulaModel::ali_mikhail_haq(mo.theta);
  if (mo.family == "fgm") return CopulaModel::fgm(mo.theta);
  if (mo.family == "gaussian") return CopulaModel::gaussian(mo.rho_set ? mo.rho : mo.theta);
  if (mo.family == "mics") return CopulaModel::mics(mo.theta, mo.resolution);
  throw std::invalid_argument("unknown family: " + mo.family);
}

json model_json(const ModelOpts& mo) {
  json j = {{"family", mo.family}};
  if (mo.family == "gaussian")
    j["rho"] = mo.rho_set ? mo.rho : mo.theta;
  else if (mo.family != "independence")
    j["theta"] = mo.theta;
  if (mo.family == "mics") j["resolution"] = mo.resolution;
  return j;
}

std::string meta_path(const std::string& out) { return out + ".meta.json"; }

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

int run_eval(const ModelOpts& mo, int grid_n, int diagonal_n, const std::string& out) {
  const auto m = build_model(mo);
  std::string csv = "u,v,C,c,i,r\n";
  auto row = [&](double u, double v) {
    csv += fmt17(u) + "," + fmt17(v) + "," + fmt17(cdf(m, u, v)) + "," +
           fmt17(pdf(m, u, v)) + "," + fmt17(local_dependence(m, u, v)) + "," +
           fmt17(relative_local_dependence(m, u, v)) + "\n";
  };
  if (diagonal_n > 0) {
    for (double u : interior_grid(diagonal_n)) row(u, u);
  } else {
    const auto g = interior_grid(grid_n);
    for (double u : g)
      for (double v : g) row(u, v);
  }
  write_text_file(out, csv);
  json meta = {{"command", "eval"},
               {"model", model_json(mo)},
               {"grid", diagonal_n > 0 ? json{{"diagonal", diagonal_n}}
                                       : json{{"size", grid_n}}},
               {"output", out}};
  write_text_file(meta_path(out), meta.dump(2) + "\n");
  return 0;
}

int run_sample(const ModelOpts& mo, std::size_t n, std::uint64_t seed,
               std::uint64_t stream, const std::string& out) {
  const auto m = build_model(mo);
  const auto s = sample(m, n, RngStream(seed, stream));
  write_sample_csv(out, s);
  json meta = sample_meta_json(s);
  meta["command"] = "sample";
  meta["model"] = model_json(mo);
  meta["output"] = out;
  write_text_file(meta_path(out), meta.dump(2) + "\n");
  if (s.ks_flagged)
    std::cerr << "note: empirical margin KS outside the 1% band (flagged, not fatal)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bivariate copula local-dependence toolkit"};
  app.require_subcommand(1);

  // ---- eval ----------------------------------------------------------
  ModelOpts eval_mo;
  int eval_grid = 9, eval_diag = 0;
  std::string eval_out = "eval.csv";
  auto* cmd_eval = app.add_subcommand("eval", "tabulate C, c, i, r on a grid");
  add_model_options(cmd_eval, eval_mo);
  cmd_eval->add_option("--grid", eval_grid, "interior grid size")->capture_default_str();
  cmd_eval->add_option("--diagonal", eval_diag, "evaluate on the diagonal instead");
  cmd_eval->add_option("-o,--output", eval_out, "output CSV path")->capture_default_str();

  // ---- sample --------------------------------------------------------
  ModelOpts sample_mo;
  std::size_t sample_n = 1000;
  std::uint64_t sample_seed = 0, sample_stream = 0;
  std::string sample_out = "sample.csv";
  auto* cmd_sample = app.add_subcommand("sample", "draw from a copula model");
  add_model_options(cmd_sample, sample_mo);
  cmd_sample->add_option("-n,--count", sample_n, "sample size")->required();
  cmd_sample->add_option("--seed", sample_seed, "rng seed (required)")->required();
  cmd_sample->add_option("--stream", sample_stream, "rng stream id")
      ->capture_default_str();
  cmd_sample->add_option("-o,--output", sample_out, "output CSV path")
      ->capture_default_str();

  // ---- estimate ------------------------------------------------------
  std::string est_input, est_out = "report.csv", est_summary, est_method = "both";
  double est_h1 = 0.0, est_h2 = 0.0, est_mask = 0.25;
  double est_grid_start = 0.15, est_grid_step = 0.1;
  int est_grid_count = 9;
  std::string est_truth_family;
  double est_truth_theta = 0.0;
  auto* cmd_est = app.add_subcommand("estimate", "estimate i and r from a sample file");
  cmd_est->add_option("--input", est_input, "sample CSV (header u,v)")->required();
  cmd_est->add_option("--method", est_method, "naive|local-frank|both")
      ->capture_default_str();
  cmd_est->add_option("--h1", est_h1, "bandwidth (default n^-1/10)");
  cmd_est->add_option("--h2", est_h2, "bandwidth (default n^-1/10)");
  cmd_est->add_option("--mask", est_mask, "low-density threshold on g00")
      ->capture_default_str();
  cmd_est->add_option("--grid-start", est_grid_start)->capture_default_str();
  cmd_est->add_option("--grid-step", est_grid_step)->capture_default_str();
  cmd_est->add_option("--grid-count", est_grid_count)->capture_default_str();
  cmd_est->add_option("--truth-family", est_truth_family,
                      "closed-form truth for the error metric");
  cmd_est->add_option("--truth-theta", est_truth_theta);
  cmd_est->add_option("-o,--output", est_out, "report CSV path")->capture_default_str();
  cmd_est->add_option("--summary", est_summary,
                      "summary JSON path (default <out>.meta.json)");

  // ---- depmap --------------------------------------------------------
  std::string dm_scenario, dm_out = "depmap.csv", dm_summary;
  ModelOpts dm_mo;
  std::size_t dm_n = 250;
  std::uint64_t dm_seed = 0;
  int dm_boot = 200;
  double dm_alpha = 0.05, dm_h1 = 0.0, dm_h2 = 0.0, dm_mask = 0.25;
  auto* cmd_dm = app.add_subcommand("depmap", "bootstrap dependence-map classification");
  cmd_dm->add_option("--scenario", dm_scenario, "parabola (or use --family)");
  cmd_dm->add_option("--family", dm_mo.family,
                     "independence|frank|clayton|gumbel|amh|fgm|gaussian|mics");
  cmd_dm->add_option("--theta", dm_mo.theta);
  cmd_dm->add_option("--rho", dm_mo.rho);
  cmd_dm->add_option("--resolution", dm_mo.resolution)->capture_default_str();
  cmd_dm->add_option("-n,--count", dm_n, "sample size")->capture_default_str();
  cmd_dm->add_option("--seed", dm_seed, "rng seed (required)")->required();
  cmd_dm->add_option("-B,--bootstrap", dm_boot, "replicates")->capture_default_str();
  cmd_dm->add_option("--alpha", dm_alpha, "two-sided level")->capture_default_str();
  cmd_dm->add_option("--h1", dm_h1, "bandwidth (default n^-1/10)");
  cmd_dm->add_option("--h2", dm_h2, "bandwidth (default n^-1/10)");
  cmd_dm->add_option("--mask", dm_mask)->capture_default_str();
  cmd_dm->add_option("-o,--output", dm_out, "label CSV path")->capture_default_str();
  cmd_dm->add_option("--summary", dm_summary, "summary JSON path");

  // ---- kendall -------------------------------------------------------
  ModelOpts kd_mo;
  std::vector<double> kd_pq, kd_rect, kd_shrink;
  bool kd_global = false, kd_brute = false, kd_modified = false;
  std::string kd_out = "kendall.json", kd_eps = "0.16,0.08,0.04,0.02";
  auto* cmd_kd = app.add_subcommand("kendall", "global and local rank correlation");
  add_model_options(cmd_kd, kd_mo);
  cmd_kd->add_flag("--global", kd_global, "global tau only");
  cmd_kd->add_option("--pq", kd_pq, "lower-corner point p q")->expected(2);
  cmd_kd->add_option("--rect", kd_rect, "rectangle p1 p2 q1 q2")->expected(4);
  cmd_kd->add_option("--shrink", kd_shrink, "anchor u v for shrinking squares")
      ->expected(2);
  cmd_kd->add_option("--eps", kd_eps, "shrinking square sides")->capture_default_str();
  bool kd_lambda = false;
  std::string kd_ps = "0.2,0.1,0.05,0.025";
  cmd_kd->add_flag("--lambda", kd_lambda, "diagonal corner-tau limit diagnostic");
  cmd_kd->add_option("--ps", kd_ps, "diagonal p sequence for --lambda")
      ->capture_default_str();
  cmd_kd->add_flag("--modified", kd_modified, "report the cubed-mass version");
  cmd_kd->add_flag("--brute", kd_brute, "include the 4D sign-integral oracle");
  cmd_kd->add_option("-o,--output", kd_out, "output JSON path")->capture_default_str();

  // ---- checkerboard --------------------------------------------------
  double cb_k = 0.0, cb_zeta = 0.0, cb_tol = 1e-8;
  int cb_n = 16, cb_sweeps = 200000;
  bool cb_panel = false;
  std::string cb_out = "checkerboard.csv", cb_family, cb_ks = "-2,-1,0,1",
              cb_zetas = "1,2,4";
  double cb_theta = 0.0;
  int cb_resolution = 64;
  auto* cmd_cb = app.add_subcommand("checkerboard", "block solver and discretization");
  cmd_cb->add_option("--k", cb_k, "power of the density in the defining equation");
  cmd_cb->add_option("--zeta", cb_zeta, "proportionality constant (density scale)");
  cmd_cb->add_option("-n,--size", cb_n, "grid size")->capture_default_str();
  cmd_cb->add_option("--tol", cb_tol, "max block residual")->capture_default_str();
  cmd_cb->add_option("--max-sweeps", cb_sweeps)->capture_default_str();
  cmd_cb->add_option("--family", cb_family, "discretize a parametric family instead");
  cmd_cb->add_option("--theta", cb_theta);
  cmd_cb->add_option("--resolution", cb_resolution)->capture_default_str();
  cmd_cb->add_flag("--panel", cb_panel, "sweep a (k, zeta) lattice");
  cmd_cb->add_option("--ks", cb_ks, "panel k values")->capture_default_str();
  cmd_cb->add_option("--zetas", cb_zetas, "panel zeta values")->capture_default_str();
  cmd_cb->add_option("-o,--output", cb_out, "output CSV path (or panel directory)")
      ->capture_default_str();

  // ---- verify --------------------------------------------------------
  std::vector<std::string> vf_only;
  bool vf_tamper = false;
  auto* cmd_vf = app.add_subcommand("verify", "run the acceptance checks");
  cmd_vf->add_option("--only", vf_only, "restrict to ids, groups, or names");
  cmd_vf->add_flag("--tamper-frank", vf_tamper, "negative-control fixture")
      ->group("");  // hidden

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_eval) return run_eval(eval_mo, eval_grid, eval_diag, eval_out);
    if (*cmd_sample)
      return run_sample(sample_mo, sample_n, sample_seed, sample_stream, sample_out);

    if (*cmd_est) {
      const auto s = read_sample_csv(est_input);
      KernelConfig cfg = default_kernel_config(s.size());
      if (est_h1 > 0.0) cfg.h1 = est_h1;
      if (est_h2 > 0.0) cfg.h2 = est_h2;
      const auto grid = stepped_grid(est_grid_start, est_grid_step, est_grid_count);
      const bool with_frank = est_method != "naive";
      auto rep = estimate_grid(s, grid, cfg, with_frank, est_mask);
      write_report_csv(est_out, rep);
      json summary = {{"command", "estimate"},
                      {"input", est_input},
                      {"method", est_method},
                      {"config",
                       {{"h1", cfg.h1},
                        {"h2", cfg.h2},
                        {"s2", cfg.s2},
                        {"mask", est_mask},
                        {"grid_start", est_grid_start},
                        {"grid_step", est_grid_step},
                        {"grid_count", est_grid_count}}},
                      {"n", s.size()},
                      {"output", est_out}};
      // Truth for the error metric: explicit flags, else the sample sidecar.
      std::string fam = est_truth_family;
      double th = est_truth_theta;
      if (const auto meta = read_sample_meta(meta_path(est_input))) {
        summary["seed"] = meta->seed;
        if (fam.empty()) {
          fam = meta->family;
          th = meta->parameter;
        }
      }
      if (!fam.empty() && fam != "parabola") {
        ModelOpts mo;
        mo.family = fam;
        mo.theta = th;
        mo.rho = th;
        mo.rho_set = true;
        const auto truth_model = build_model(mo);
        auto truth = [&](double x, double y) {
          return relative_local_dependence(truth_model, x, y);
        };
        summary["truth"] = {{"family", fam}, {"theta", th}};
        if (est_method != "local-frank")
          summary["error_naive"] = error_metric(rep, RMethod::naive, truth);
        if (with_frank)
          summary["error_local_frank"] = error_metric(rep, RMethod::local_frank, truth);
      }
      write_text_file(est_summary.empty() ? meta_path(est_out) : est_summary,
                      summary.dump(2) + "\n");
      return 0;
    }

    if (*cmd_dm) {
      SampleSet data;
      json source;
      if (dm_scenario == "parabola") {
        data = simulate_parabola(dm_n, RngStream(dm_seed, 0)).ranks;
        source = {{"scenario", "parabola"}};
      } else if (!dm_scenario.empty()) {
        throw std::invalid_argument("unknown scenario: " + dm_scenario);
      } else if (!dm_mo.family.empty()) {
        dm_mo.theta_set = true;
        data = sample(build_model(dm_mo), dm_n, RngStream(dm_seed, 0));
        source = {{"model", model_json(dm_mo)}};
      } else {
        throw std::invalid_argument("depmap needs --scenario or --family");
      }
      KernelConfig cfg = default_kernel_config(dm_n);
      if (dm_h1 > 0.0) cfg.h1 = dm_h1;
      if (dm_h2 > 0.0) cfg.h2 = dm_h2;
      const auto grid = stepped_grid(0.15, 0.1, 9);
      const auto rep = dependence_map(data, grid, cfg, dm_boot, dm_alpha,
                                      RngStream(dm_seed, 100), dm_mask);
      write_report_csv(dm_out, rep);
      int pos = 0, neg = 0, neu = 0, low = 0;
      for (const auto& p : rep.points) {
        pos += p.label == PointLabel::positive;
        neg += p.label == PointLabel::negative;
        neu += p.label == PointLabel::neutral;
        low += p.label == PointLabel::low_density;
      }
      json summary = {{"command", "depmap"},
                      {"source", source},
                      {"n", dm_n},
                      {"seed", dm_seed},
                      {"config",
                       {{"h1", cfg.h1},
                        {"h2", cfg.h2},
                        {"bootstrap", dm_boot},
                        {"alpha", dm_alpha},
                        {"mask", dm_mask}}},
                      {"labels",
                       {{"positive", pos},
                        {"negative", neg},
                        {"neutral", neu},
                        {"low_density", low}}},
                      {"output", dm_out}};
      write_text_file(dm_summary.empty() ? meta_path(dm_out) : dm_summary,
                      summary.dump(2) + "\n");
      return 0;
    }

    if (*cmd_kd) {
      const auto m = build_model(kd_mo);
      json out = {{"command", "kendall"}, {"model", model_json(kd_mo)}};
      if (kd_global || (kd_pq.empty() && kd_rect.empty() && kd_shrink.empty()))
        out["tau_global"] = tau_global(m);
      if (!kd_pq.empty()) {
        const double p = kd_pq[0], q = kd_pq[1];
        out["region"] = {{"p", p}, {"q", q}};
        out["tau_LL"] = tau_ll(m, p, q);
        const RectRegion r(0.0, p, 0.0, q);
        out["tau_naive"] = tau_rect_naive(m, r);
        out["tau_modified"] = tau_rect_modified(m, r);
        if (kd_brute) out["tau_LL_bruteforce"] = tau_ll_bruteforce(m, p, q);
      }
      if (!kd_rect.empty()) {
        const RectRegion r(kd_rect[0], kd_rect[1], kd_rect[2], kd_rect[3]);
        out["region"] = {{"p1", r.p1}, {"p2", r.p2}, {"q1", r.q1}, {"q2", r.q2}};
        out["tau_naive"] = tau_rect_naive(m, r);
        out["tau_modified"] = tau_rect_modified(m, r);
        if (r.p1 == 0.0 && r.q1 == 0.0) out["tau_LL"] = tau_ll(m, r.p2, r.q2);
      }
      if (!kd_shrink.empty()) {
        const double u = kd_shrink[0], v = kd_shrink[1];
        json seq = json::array();
        std::vector<double> eps = parse_list(kd_eps);
        std::vector<double> modified;
        for (double e : eps) {
          const RectRegion r(u, u + e, v, v + e);
          json row = {{"eps", e},
                      {"tau_naive", tau_rect_naive(m, r)},
                      {"tau_modified", tau_rect_modified(m, r)}};
          modified.push_back(row["tau_modified"].get<double>());
          seq.push_back(row);
        }
        out["shrink"] = {{"anchor", {u, v}}, {"values", seq}};
        if (modified.size() >= 2) {
          out["shrink"]["extrapolated_modified"] =
              2.0 * modified[modified.size() - 1] - modified[modified.size() - 2];
          out["shrink"]["reference_r_over_18"] =
              relative_local_dependence(m, u, v) / 18.0;
        }
        (void)kd_modified;
      }
      if (kd_lambda) {
        const auto lim = lambda_ll_kendall(m, parse_list(kd_ps));
        out["lambda_LL"] = {{"p", lim.p},
                            {"tau_LL", lim.value},
                            {"limit", lim.limit},
                            {"max_successive_diff", lim.max_successive_diff},
                            {"truncated", lim.truncated}};
      }
      out["diagnostics"] = {{"quad_order", default_quad_order()}};
      write_text_file(kd_out, out.dump(2) + "\n");
      return 0;
    }

    if (*cmd_cb) {
      if (cb_panel) {
        std::filesystem::create_directories(cb_out);
        const auto ks = parse_list(cb_ks);
        const auto zetas = parse_list(cb_zetas);
        const auto cells = panel_sweep(ks, zetas, cb_n, cb_tol, cb_sweeps);
        json index = json::array();
        for (const auto& cell : cells) {
          char name[64];
          std::snprintf(name, sizeof name, "k%+g_zeta%g", cell.k, cell.zeta);
          json entry = {{"k", cell.k},
                        {"zeta", cell.zeta},
                        {"solved", cell.solved},
                        {"converged", cell.converged}};
          if (!cell.error.empty()) entry["error"] = cell.error;
          if (cell.solved) {
            const std::string file = cb_out + "/" + name + ".csv";
            write_matrix_csv(file, cell.result.matrix);
            entry["file"] = file;
            entry["sweeps"] = cell.result.sweeps;
            entry["max_residual"] = cell.result.max_residual;
          }
          index.push_back(entry);
        }
        json meta = {{"command", "checkerboard-panel"},
                     {"n", cb_n},
                     {"tol", cb_tol},
                     {"max_sweeps", cb_sweeps},
                     {"cells", index}};
        write_text_file(cb_out + "/index.json", meta.dump(2) + "\n");
        return 0;
      }
      if (!cb_family.empty()) {
        ModelOpts mo;
        mo.family = cb_family;
        mo.theta = cb_theta;
        mo.rho = cb_theta;
        mo.rho_set = true;
        mo.resolution = cb_resolution;
        const auto cb = discretize(build_model(mo), cb_n);
        write_matrix_csv(cb_out, cb);
        json meta = {{"command", "checkerboard-discretize"},
                     {"model", model_json(mo)},
                     {"n", cb_n},
                     {"output", cb_out}};
        write_text_file(meta_path(cb_out), meta.dump(2) + "\n");
        return 0;
      }
      const auto res = greedy_solve({cb_k, cb_zeta, cb_n, cb_tol, cb_sweeps});
      write_matrix_csv(cb_out, res.matrix);
      json meta = {{"command", "checkerboard"},
                   {"n", cb_n},
                   {"k", cb_k},
                   {"zeta", cb_zeta},
                   {"tol", cb_tol},
                   {"max_sweeps", cb_sweeps},
                   {"sweeps", res.sweeps},
                   {"converged", res.converged},
                   {"max_residual", res.max_residual},
                   {"block_zeta_raw", block_zeta(cb_zeta, cb_k, cb_n)},
                   {"output", cb_out}};
      write_text_file(meta_path(cb_out), meta.dump(2) + "\n");
      if (!res.converged)
        std::cerr << "note: not converged (residual " << res.max_residual << ")\n";
      return 0;
    }

    if (*cmd_vf) {
      acceptance::Options opt;
      if (vf_tamper) opt.tamper_frank_bias = 0.5;
      return acceptance::run(std::cout, opt, vf_only) == 0 ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
