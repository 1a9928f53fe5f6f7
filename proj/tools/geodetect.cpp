// Copyright 2026 geodetect authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// geodetect: simulation and hypothesis-testing toolkit for latent geometry
// in random graphs and random matrices.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "geodetect/divergence.hpp"
#include "geodetect/harness.hpp"
#include "geodetect/io.hpp"
#include "geodetect/oracle.hpp"
#include "geodetect/quantile.hpp"
#include "geodetect/statistics.hpp"
#include "geodetect/version.hpp"

namespace {

using namespace geodetect;
using nlohmann::json;

int cmd_threshold(const std::string& spectrum, double p, const std::string& method,
                  long samples, double tol, std::uint64_t seed) {
  const Spectrum s = parse_spectrum_spec(spectrum);
  QuantileResult res;
  if (method == "mc") {
    res = solve_threshold_mc(s, p, samples, SeedSpec{seed, 0});
  } else if (method == "cf") {
    res = solve_threshold_cf(s, p, tol);
  } else {
    std::cerr << "threshold: method must be mc or cf\n";
    return 2;
  }
  std::printf("t=%.17g achieved_p=%.17g err=%.17g method=%s\n", res.t, res.achieved_p,
              res.stderr_or_quadrature_bound,
              res.method == QuantileResult::Method::monte_carlo ? "mc" : "cf");
  return 0;
}

int cmd_gen_graph(const std::string& model, std::size_t n, double p, const std::string& spectrum,
                  double t, bool t_given, long threshold_samples, std::uint64_t seed,
                  std::uint64_t stream, const std::string& out) {
  const SeedSpec sd{seed, stream};
  GraphSample g(1, p);
  if (model == "er") {
    g = sample_er(n, p, sd);
  } else if (model == "rgg") {
    const Spectrum s = parse_spectrum_spec(spectrum);
    double tt = t;
    if (!t_given) {
      tt = solve_threshold_mc(s, p, threshold_samples, SeedSpec{seed, mix64(0x74687265ULL)}).t;
    }
    g = sample_rgg(s, n, p, tt, sd);
  } else {
    std::cerr << "gen-graph: model must be er or rgg\n";
    return 2;
  }
  if (out.empty()) {
    write_graph(std::cout, g);
  } else {
    write_graph_file(out, g);
  }
  return 0;
}

int cmd_gen_matrix(const std::string& model, std::size_t n, const std::string& spectrum,
                   double u, std::uint64_t seed, std::uint64_t stream, const std::string& out) {
  const SeedSpec sd{seed, stream};
  SymMatrixSample m(1);
  if (model == "gaussian") {
    m = sample_gaussian_matrix(n, sd);
  } else if (model == "wishart") {
    m = sample_wishart(parse_spectrum_spec(spectrum), n, sd);
  } else if (model == "spiked") {
    m = sample_spiked(n, u, sd);
  } else {
    std::cerr << "gen-matrix: model must be gaussian, wishart, or spiked\n";
    return 2;
  }
  if (out.empty()) {
    write_matrix(std::cout, m);
  } else {
    write_matrix_file(out, m);
  }
  return 0;
}

int cmd_stat(const std::string& input, const std::string& statistic, double fpr) {
  std::ifstream probe(input);
  if (!probe) {
    std::cerr << "stat: cannot open " << input << "\n";
    return 2;
  }
  std::string head;
  std::getline(probe, head);
  probe.close();

  TestReport r;
  if (head.rfind("rgg-graph v1", 0) == 0) {
    if (statistic != "signed-triangles") {
      std::cerr << "stat: graph input supports --statistic signed-triangles\n";
      return 2;
    }
    r = run_test(read_graph_file(input), fpr);
  } else if (head.rfind("symmat v1", 0) == 0) {
    if (statistic != "trace-cube") {
      std::cerr << "stat: matrix input supports --statistic trace-cube\n";
      return 2;
    }
    r = run_test(read_matrix_file(input), fpr);
  } else {
    std::cerr << "stat: unrecognized file header\n";
    return 2;
  }
  const json j{{"statistic_name", to_string(r.statistic_name)},
               {"value", r.value},
               {"null_mean", r.null_mean},
               {"null_sd", r.null_sd},
               {"z_score", r.z_score},
               {"threshold_z", r.threshold_z},
               {"reject", r.reject}};
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_chi2(std::size_t n, double u, double a, long reps, std::uint64_t seed,
             bool allow_unguarded) {
  Chi2Options opts;
  opts.a = a;
  opts.allow_unguarded = allow_unguarded;
  const Chi2Result res = chi2_truncated_mc(n, u, reps, SeedSpec{seed, 0}, opts);
  const TvEstimate tv = res.tv();
  const json j{{"n", n},
               {"u", u},
               {"a", res.a},
               {"chi2", res.chi2},
               {"chi2_stderr", res.chi2_stderr},
               {"tv_bound", tv.lower_bound},
               {"tv_stderr", tv.stderr_value},
               {"replicates", res.replicates},
               {"acceptance_rate", res.acceptance_rate},
               {"unguarded", res.unguarded},
               {"variance_blowup", res.variance_blowup}};
  std::cout << j.dump() << "\n";
  return res.variance_blowup ? 1 : 0;
}

int cmd_tvgap(const std::string& file0, const std::string& file1) {
  const auto s0 = read_statistic_samples(file0);
  const auto s1 = read_statistic_samples(file1);
  const TvEstimate tv = tv_lower_bound_cdf_gap(s0, s1);
  const json j{{"gap", tv.lower_bound},
               {"stderr", tv.stderr_value},
               {"lower_bound_95", std::max(0.0, tv.lower_bound - tv.stderr_value)},
               {"n0", s0.size()},
               {"n1", s1.size()}};
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, bool as_json) {
  const auto reports = run_oracle_suite(suite);
  bool all_passed = true;
  for (const OracleReport& r : reports) {
    all_passed = all_passed && r.passed;
    if (as_json) {
      const json j{{"check", r.check_name},
                   {"computed", r.computed},
                   {"reference", r.reference},
                   {"tolerance", r.tolerance},
                   {"passed", r.passed}};
      std::cout << j.dump() << "\n";
    } else {
      std::printf("%-60s computed=%- 14.8g reference=%- 14.8g tol=%-10.3g %s\n",
                  r.check_name.c_str(), r.computed, r.reference, r.tolerance,
                  r.passed ? "ok" : "FAIL");
    }
  }
  if (!as_json) {
    std::printf("%zu checks, %s\n", reports.size(), all_passed ? "all passed" : "FAILURES");
  }
  return all_passed ? 0 : 1;
}

void print_summaries(const std::vector<PointSummary>& summaries) {
  std::printf("%5s %6s %8s %12s %12s %9s %9s %9s\n", "point", "n", "gamma", "d_eff", "signal",
              "power", "fpr", "tv_gap");
  for (const PointSummary& s : summaries) {
    if (s.skipped) {
      std::printf("%5ld %6ld %8s %12.5g %12.5g  skipped: desk-scale budget\n", s.point, s.n,
                  s.gamma ? std::to_string(*s.gamma).c_str() : "-", s.d_eff, s.signal);
      continue;
    }
    std::printf("%5ld %6ld %8s %12.5g %12.5g %9.4f %9.4f %9.4f\n", s.point, s.n,
                s.gamma ? std::to_string(*s.gamma).substr(0, 6).c_str() : "-", s.d_eff, s.signal,
                s.power, s.fpr_hat, s.cdf_gap_tv);
  }
}

int cmd_run(const std::string& config_path) {
  const ExperimentConfig cfg = parse_config_file(config_path);
  switch (cfg.kind) {
    case ExperimentKind::power_curve: {
      print_summaries(summarize(run_power_curve(cfg)));
      return 0;
    }
    case ExperimentKind::phase_diagram: {
      const auto records = run_phase_diagram(cfg);
      print_summaries(summarize(records));
      for (double gamma : cfg.gamma_grid) {
        const LogisticFit fit = fit_power_transition(records, gamma);
        std::printf("gamma=%g crossing_signal=%.5g slope=%.4g %s\n", gamma, fit.crossing_signal,
                    fit.slope, fit.converged ? "" : "(fit not converged)");
      }
      return 0;
    }
    case ExperimentKind::null_calibration: {
      const auto summaries = summarize(run_null_calibration(cfg));
      for (const PointSummary& s : summaries) {
        const double expected =
            null_moments(StatisticName::signed_triangles, static_cast<std::size_t>(s.n), cfg.p)
                .variance;
        std::printf("n=%ld rejection_rate=%.4f null_var=%.6g expected_var=%.6g\n", s.n,
                    s.fpr_hat, s.null_stat_variance, expected);
      }
      return 0;
    }
    case ExperimentKind::chi2_scan: {
      for (const Chi2ScanRow& r : run_chi2_scan(cfg)) {
        std::printf("n=%ld u=%.6g a=%.4g chi2=%.6g stderr=%.3g tv_bound=%.6g%s\n", r.n, r.u, r.a,
                    r.chi2, r.chi2_stderr, r.tv_bound, r.unguarded ? " (unguarded)" : "");
      }
      return 0;
    }
    case ExperimentKind::wishart_vs_gaussian: {
      print_summaries(summarize(run_wishart_vs_gaussian(cfg)));
      return 0;
    }
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodetect: latent-geometry detection experiments on random graphs and matrices"};
  app.set_version_flag("--version", std::string("geodetect ") + GEODETECT_VERSION);
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run an experiment from a key=value config file");
  std::string config_path;
  run->add_option("--config", config_path, "config file path")->required();

  // threshold
  auto* thr = app.add_subcommand("threshold", "solve the edge threshold t_{p,alpha}");
  std::string thr_spectrum, thr_method = "mc";
  double thr_p = 0.5, thr_tol = 1e-4;
  long thr_samples = 2000000;
  std::uint64_t thr_seed = 0;
  thr->add_option("--spectrum", thr_spectrum)->required();
  thr->add_option("--p", thr_p)->required();
  thr->add_option("--method", thr_method, "mc|cf");
  thr->add_option("--samples", thr_samples);
  thr->add_option("--tol", thr_tol);
  thr->add_option("--seed", thr_seed);

  // gen-graph
  auto* gg = app.add_subcommand("gen-graph", "sample a graph (er or rgg)");
  std::string gg_model, gg_spectrum, gg_out;
  std::size_t gg_n = 0;
  double gg_p = 0.5, gg_t = 0.0;
  long gg_threshold_samples = 2000000;
  std::uint64_t gg_seed = 0, gg_stream = 0;
  gg->add_option("--model", gg_model, "er|rgg")->required();
  gg->add_option("--n", gg_n)->required();
  gg->add_option("--p", gg_p)->required();
  gg->add_option("--spectrum", gg_spectrum);
  auto* gg_t_opt = gg->add_option("--t", gg_t, "edge threshold; solved by MC if omitted");
  gg->add_option("--threshold-samples", gg_threshold_samples);
  gg->add_option("--seed", gg_seed);
  gg->add_option("--stream", gg_stream);
  gg->add_option("--out", gg_out, "output path (stdout if omitted)");

  // gen-matrix
  auto* gm = app.add_subcommand("gen-matrix", "sample a matrix (gaussian, wishart, spiked)");
  std::string gm_model, gm_spectrum, gm_out;
  std::size_t gm_n = 0;
  double gm_u = 0.0;
  std::uint64_t gm_seed = 0, gm_stream = 0;
  gm->add_option("--model", gm_model, "gaussian|wishart|spiked")->required();
  gm->add_option("--n", gm_n)->required();
  gm->add_option("--spectrum", gm_spectrum);
  gm->add_option("--u", gm_u, "spike strength in [0,1]");
  gm->add_option("--seed", gm_seed);
  gm->add_option("--stream", gm_stream);
  gm->add_option("--out", gm_out, "output path (stdout if omitted)");

  // stat
  auto* st = app.add_subcommand("stat", "run a detection statistic on a sample file");
  std::string st_input, st_statistic;
  double st_fpr = 0.05;
  st->add_option("--input", st_input)->required();
  st->add_option("--statistic", st_statistic, "signed-triangles|trace-cube")->required();
  st->add_option("--fpr", st_fpr);

  // chi2
  auto* c2 = app.add_subcommand("chi2", "truncated chi^2 of the spiked ensemble vs M(n)");
  std::size_t c2_n = 0;
  double c2_u = 0.0, c2_a = 0.0;
  long c2_reps = 1000000;
  std::uint64_t c2_seed = 0;
  bool c2_unguarded = false;
  c2->add_option("--n", c2_n)->required();
  c2->add_option("--u", c2_u)->required();
  c2->add_option("--a", c2_a, "truncation level; default (u^2 n)^{-1/4} clamped to >= 1");
  c2->add_option("--reps", c2_reps);
  c2->add_option("--seed", c2_seed);
  c2->add_flag("--allow-unguarded", c2_unguarded, "run outside the u^2 n <= 0.1 regime");

  // tvgap
  auto* tg = app.add_subcommand("tvgap", "cdf-gap TV lower bound between two statistic files");
  std::string tg_file0, tg_file1;
  tg->add_option("--file0", tg_file0)->required();
  tg->add_option("--file1", tg_file1)->required();

  // verify
  auto* vf = app.add_subcommand("verify", "run the numerical verification oracles");
  std::string vf_suite = "all";
  bool vf_json = false;
  vf->add_option("--suite", vf_suite, "all|lemma-inner|moments|tails|triangles");
  vf->add_flag("--json", vf_json, "machine-readable JSON lines");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (thr->parsed()) {
      return cmd_threshold(thr_spectrum, thr_p, thr_method, thr_samples, thr_tol, thr_seed);
    }
    if (gg->parsed()) {
      return cmd_gen_graph(gg_model, gg_n, gg_p, gg_spectrum, gg_t, gg_t_opt->count() > 0,
                           gg_threshold_samples, gg_seed, gg_stream, gg_out);
    }
    if (gm->parsed()) {
      return cmd_gen_matrix(gm_model, gm_n, gm_spectrum, gm_u, gm_seed, gm_stream, gm_out);
    }
    if (st->parsed()) return cmd_stat(st_input, st_statistic, st_fpr);
    if (c2->parsed()) return cmd_chi2(c2_n, c2_u, c2_a, c2_reps, c2_seed, c2_unguarded);
    if (tg->parsed()) return cmd_tvgap(tg_file0, tg_file1);
    if (vf->parsed()) return cmd_verify(vf_suite, vf_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
