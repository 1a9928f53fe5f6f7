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

#include "geodetect/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "geodetect/io.hpp"
#include "geodetect/parallel.hpp"
#include "geodetect/quantile.hpp"
#include "geodetect/statistics.hpp"
#include "geodetect/version.hpp"

namespace geodetect {

namespace {

using nlohmann::json;

constexpr long kMatrixChannelDim = 100000;
constexpr long kSkipDim = 10000000;

double parse_real(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
  }
  return std::stod(text);
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, Parse parse) {
  std::vector<T> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    if (!item.empty()) out.push_back(parse(item));
  }
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

json record_to_json(const ExperimentRecord& r) {
  json j{{"config_hash", r.config_hash}, {"point", r.point},
         {"n", r.n},                     {"d_eff", r.d_eff},
         {"signal", r.signal},           {"replicate", r.replicate},
         {"hypothesis", r.hypothesis},   {"statistic", r.statistic},
         {"reject", r.reject},           {"wall_time_ms", r.wall_time_ms}};
  if (r.gamma.has_value()) j["gamma"] = *r.gamma;
  return j;
}

ExperimentRecord record_from_json(const json& j) {
  ExperimentRecord r;
  r.config_hash = j.at("config_hash").get<std::string>();
  r.point = j.at("point").get<long>();
  r.n = j.at("n").get<long>();
  if (j.contains("gamma")) r.gamma = j.at("gamma").get<double>();
  r.d_eff = j.at("d_eff").get<double>();
  r.signal = j.at("signal").get<double>();
  r.replicate = j.at("replicate").get<long>();
  r.hypothesis = j.at("hypothesis").get<std::string>();
  r.statistic = j.at("statistic").get<double>();
  r.reject = j.at("reject").get<bool>();
  r.wall_time_ms = j.at("wall_time_ms").get<long>();
  return r;
}

// Append-only persistence with single-writer serialization.
class RecordSink {
 public:
  RecordSink(const std::string& path, const ExperimentConfig& cfg, const std::string& hash)
      : hash_(hash) {
    if (path.empty()) return;
    load_existing(path);
    write_meta(path, cfg);
    os_.open(path, std::ios_base::app);
    if (!os_) throw std::runtime_error("cannot open results file: " + path);
  }

  bool already_done(long point, long replicate, const std::string& hyp) const {
    return done_.count(key(point, replicate, hyp)) > 0;
  }

  void append(const ExperimentRecord& r) {
    const std::lock_guard<std::mutex> lock(mu_);
    records_.push_back(r);
    if (os_.is_open()) {
      os_ << record_to_json(r).dump() << '\n';
      os_.flush();
    }
  }

  std::vector<ExperimentRecord> take_records() { return std::move(records_); }

 private:
  static std::string key(long point, long replicate, const std::string& hyp) {
    return std::to_string(point) + ":" + std::to_string(replicate) + ":" + hyp;
  }

  void load_existing(const std::string& path) {
    std::ifstream is(path);
    if (!is) return;
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("config_hash")) continue;
      if (j["config_hash"].get<std::string>() != hash_) continue;
      const ExperimentRecord r = record_from_json(j);
      done_.insert(key(r.point, r.replicate, r.hypothesis));
      records_.push_back(r);
    }
  }

  void write_meta(const std::string& path, const ExperimentConfig& cfg) {
    json meta;
    meta["version"] = std::string("geodetect ") + GEODETECT_VERSION;
    meta["config_hash"] = hash_;
    json c;
    c["kind"] = to_string(cfg.kind);
    c["spectrum"] = cfg.spectrum_spec;
    c["n_grid"] = cfg.n_grid;
    c["p"] = cfg.p;
    c["replicates"] = cfg.replicates;
    c["fpr"] = cfg.false_positive_rate;
    c["master_seed"] = cfg.master_seed;
    c["output"] = cfg.output_path;
    c["channel"] = cfg.channel;
    c["threshold_samples"] = cfg.threshold_samples;
    c["family_d"] = cfg.family_d;
    c["gamma_grid"] = cfg.gamma_grid;
    c["u_grid"] = cfg.u_grid;
    c["chi2_a"] = cfg.chi2_a;
    c["allow_unguarded"] = cfg.allow_unguarded;
    meta["config"] = c;
    std::ofstream os(path + ".meta.json");
    if (!os) throw std::runtime_error("cannot open meta file: " + path + ".meta.json");
    os << meta.dump(2) << '\n';
  }

  std::string hash_;
  std::mutex mu_;
  std::ofstream os_;
  std::set<std::string> done_;
  std::vector<ExperimentRecord> records_;
};

struct SweepPoint {
  long point = 0;
  long n = 0;
  std::optional<double> gamma;
  const Spectrum* spectrum = nullptr;  // null for pure-null experiments
  double d_eff = 0.0;
  double t = 0.0;        // raw inner-product threshold for graphs
  bool skipped = false;
};

long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count());
}

// Shared replicate loop over (point, replicate, hypothesis) work items.
// sample_stat(point, hypothesis, seed) produces the statistic value.
template <typename SampleStat>
std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& cfg,
                                        const std::vector<SweepPoint>& points,
                                        StatisticName stat, bool with_null,
                                        SampleStat sample_stat,
                                        const char* solo_label = "alt") {
  const std::string hash = config_hash(cfg);
  RecordSink sink(cfg.output_path, cfg, hash);

  struct Item {
    const SweepPoint* pt;
    long replicate;
    const char* hypothesis;
  };
  std::vector<Item> items;
  for (const SweepPoint& pt : points) {
    if (pt.skipped) {
      if (!sink.already_done(pt.point, 0, "skipped")) {
        ExperimentRecord r;
        r.config_hash = hash;
        r.point = pt.point;
        r.n = pt.n;
        r.gamma = pt.gamma;
        r.d_eff = pt.d_eff;
        r.signal = static_cast<double>(pt.n) * pt.n * pt.n / pt.d_eff;
        r.replicate = 0;
        r.hypothesis = "skipped";
        sink.append(r);
      }
      continue;
    }
    const char* first_label = with_null ? "alt" : solo_label;
    for (long rep = 0; rep < cfg.replicates; ++rep) {
      if (!sink.already_done(pt.point, rep, first_label)) {
        items.push_back({&pt, rep, first_label});
      }
      if (with_null && !sink.already_done(pt.point, rep, "null")) {
        items.push_back({&pt, rep, "null"});
      }
    }
  }

  parallel_for(items.size(), [&](std::size_t i) {
    const Item& it = items[i];
    const auto start = std::chrono::steady_clock::now();
    const SeedSpec seed{cfg.master_seed,
                        record_stream_id(it.pt->point, it.replicate, it.hypothesis)};
    const double value = sample_stat(*it.pt, it.hypothesis, seed);

    ExperimentRecord r;
    r.config_hash = hash;
    r.point = it.pt->point;
    r.n = it.pt->n;
    r.gamma = it.pt->gamma;
    r.d_eff = it.pt->d_eff;
    r.signal = static_cast<double>(it.pt->n) * it.pt->n * it.pt->n / it.pt->d_eff;
    r.replicate = it.replicate;
    r.hypothesis = it.hypothesis;
    r.statistic = value;
    r.reject = run_test(value, stat, static_cast<std::size_t>(it.pt->n), cfg.p,
                        cfg.false_positive_rate)
                   .reject;
    r.wall_time_ms = elapsed_ms(start);
    sink.append(r);
  });

  auto records = sink.take_records();
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.point, a.replicate, a.hypothesis) <
           std::tie(b.point, b.replicate, b.hypothesis);
  });
  return records;
}

GraphSample sample_alt_graph(const ExperimentConfig& cfg, const Spectrum& s, const SweepPoint& pt,
                             SeedSpec seed) {
  const bool matrix_channel =
      cfg.channel == "matrix" ||
      (cfg.channel == "auto" && static_cast<long>(s.dim()) >= kMatrixChannelDim);
  const auto n = static_cast<std::size_t>(pt.n);
  if (matrix_channel) {
    const SymMatrixSample w = sample_wishart(s, n, seed);
    return threshold_graph(w, pt.t / s.l2(), cfg.p);
  }
  return sample_rgg(s, n, cfg.p, pt.t, seed);
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::power_curve: return "power_curve";
    case ExperimentKind::phase_diagram: return "phase_diagram";
    case ExperimentKind::null_calibration: return "null_calibration";
    case ExperimentKind::chi2_scan: return "chi2_scan";
    case ExperimentKind::wishart_vs_gaussian: return "wishart_vs_gaussian";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("config: p must be in (0,1)");
  if (replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
  if (kind == ExperimentKind::chi2_scan) {
    if (n_grid.empty() || u_grid.empty()) {
      throw std::invalid_argument("config: chi2_scan needs n_grid and u_grid");
    }
    return;
  }
  if (n_grid.empty()) throw std::invalid_argument("config: n_grid must be nonempty");
  if (kind == ExperimentKind::phase_diagram) {
    if (gamma_grid.empty()) throw std::invalid_argument("config: gamma_grid must be nonempty");
    if (family_d < 1) throw std::invalid_argument("config: family_d must be >= 1");
  } else if (spectrum_spec.empty() && kind != ExperimentKind::null_calibration) {
    throw std::invalid_argument("config: spectrum must be set");
  }
}

ExperimentConfig parse_config(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "kind") {
      if (value == "power_curve") cfg.kind = ExperimentKind::power_curve;
      else if (value == "phase_diagram") cfg.kind = ExperimentKind::phase_diagram;
      else if (value == "null_calibration") cfg.kind = ExperimentKind::null_calibration;
      else if (value == "chi2_scan") cfg.kind = ExperimentKind::chi2_scan;
      else if (value == "wishart_vs_gaussian") cfg.kind = ExperimentKind::wishart_vs_gaussian;
      else throw std::invalid_argument("config: unknown kind " + value);
    } else if (key == "spectrum") {
      cfg.spectrum_spec = value;
    } else if (key == "n_grid") {
      cfg.n_grid = parse_list<long>(value, [](const std::string& s) { return std::stol(s); });
    } else if (key == "p") {
      cfg.p = parse_real(value);
    } else if (key == "replicates") {
      cfg.replicates = std::stol(value);
    } else if (key == "fpr") {
      cfg.false_positive_rate = parse_real(value);
    } else if (key == "master_seed") {
      cfg.master_seed = std::stoull(value);
    } else if (key == "output") {
      cfg.output_path = value;
    } else if (key == "channel") {
      if (value != "auto" && value != "direct" && value != "matrix") {
        throw std::invalid_argument("config: channel must be auto|direct|matrix");
      }
      cfg.channel = value;
    } else if (key == "threshold_samples") {
      cfg.threshold_samples = std::stol(value);
    } else if (key == "family_d") {
      cfg.family_d = std::stol(value);
    } else if (key == "gamma_grid") {
      cfg.gamma_grid = parse_list<double>(value, parse_real);
    } else if (key == "u_grid") {
      cfg.u_grid = parse_list<double>(value, parse_real);
    } else if (key == "chi2_a") {
      cfg.chi2_a = parse_real(value);
    } else if (key == "allow_unguarded") {
      cfg.allow_unguarded = value == "1" || value == "true";
    } else {
      throw std::invalid_argument("config: unknown key " + key);
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: expected key=value, got: " + line);
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return parse_config(kv);
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "kind=" << to_string(cfg.kind) << ";spectrum=" << cfg.spectrum_spec << ";n_grid=";
  for (long n : cfg.n_grid) os << n << ',';
  os.precision(17);
  os << ";p=" << cfg.p << ";replicates=" << cfg.replicates
     << ";fpr=" << cfg.false_positive_rate << ";master_seed=" << cfg.master_seed
     << ";channel=" << cfg.channel << ";threshold_samples=" << cfg.threshold_samples
     << ";family_d=" << cfg.family_d << ";gamma_grid=";
  for (double g : cfg.gamma_grid) os << g << ',';
  os << ";u_grid=";
  for (double u : cfg.u_grid) os << u << ',';
  os << ";chi2_a=" << cfg.chi2_a << ";allow_unguarded=" << cfg.allow_unguarded;
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(os.str())));
  return std::string(buf);
}

std::uint64_t record_stream_id(long point, long replicate, const std::string& hypothesis) {
  const std::uint64_t hyp_tag = fnv1a(hypothesis);
  std::uint64_t h = mix64(static_cast<std::uint64_t>(point) + 0x706f696eULL);
  h = mix64(h ^ (static_cast<std::uint64_t>(replicate) * 0x9e3779b97f4a7c15ULL));
  return mix64(h ^ hyp_tag);
}

std::vector<PointSummary> summarize(const std::vector<ExperimentRecord>& records) {
  std::map<long, PointSummary> by_point;
  std::map<long, std::vector<double>> alt_stats, null_stats;
  for (const ExperimentRecord& r : records) {
    PointSummary& s = by_point[r.point];
    s.point = r.point;
    s.n = r.n;
    s.gamma = r.gamma;
    s.d_eff = r.d_eff;
    s.signal = r.signal;
    if (r.hypothesis == "skipped") {
      s.skipped = true;
    } else if (r.hypothesis == "alt") {
      ++s.alt_count;
      if (r.reject) s.power += 1.0;
      alt_stats[r.point].push_back(r.statistic);
    } else if (r.hypothesis == "null") {
      ++s.null_count;
      if (r.reject) s.fpr_hat += 1.0;
      null_stats[r.point].push_back(r.statistic);
    }
  }
  std::vector<PointSummary> out;
  for (auto& [point, s] : by_point) {
    if (s.alt_count > 0) {
      s.power /= static_cast<double>(s.alt_count);
      s.power_stderr = std::sqrt(s.power * (1.0 - s.power) / static_cast<double>(s.alt_count));
    }
    if (s.null_count > 0) {
      s.fpr_hat /= static_cast<double>(s.null_count);
      s.fpr_stderr =
          std::sqrt(s.fpr_hat * (1.0 - s.fpr_hat) / static_cast<double>(s.null_count));
      const auto& ns = null_stats[point];
      double mean = 0.0;
      for (double v : ns) mean += v;
      mean /= static_cast<double>(ns.size());
      double var = 0.0;
      for (double v : ns) var += (v - mean) * (v - mean);
      if (ns.size() > 1) var /= static_cast<double>(ns.size() - 1);
      s.null_stat_mean = mean;
      s.null_stat_variance = var;
    }
    if (s.alt_count > 0 && s.null_count > 0) {
      const TvEstimate tv = tv_lower_bound_cdf_gap(alt_stats[point], null_stats[point]);
      s.cdf_gap_tv = tv.lower_bound;
      s.cdf_gap_stderr = tv.stderr_value;
    }
    out.push_back(s);
  }
  return out;
}

LogisticFit fit_power_transition(const std::vector<ExperimentRecord>& records,
                                 std::optional<double> gamma) {
  std::vector<std::pair<double, double>> obs;  // (log signal, reject)
  for (const ExperimentRecord& r : records) {
    if (r.hypothesis != "alt") continue;
    if (gamma.has_value()) {
      if (!r.gamma.has_value() || std::abs(*r.gamma - *gamma) > 1e-12) continue;
    }
    obs.emplace_back(std::log(r.signal), r.reject ? 1.0 : 0.0);
  }
  LogisticFit fit;
  if (obs.size() < 4) return fit;

  // IRLS with a small ridge; separable data stays finite.
  double a = 0.0, b = 0.5;
  constexpr double kRidge = 1e-4;
  for (int iter = 0; iter < 100; ++iter) {
    double g0 = -kRidge * a, g1 = -kRidge * b;
    double h00 = kRidge, h01 = 0.0, h11 = kRidge;
    for (const auto& [x, y] : obs) {
      const double eta = a + b * x;
      const double mu = 1.0 / (1.0 + std::exp(-eta));
      const double w = std::max(mu * (1.0 - mu), 1e-10);
      g0 += y - mu;
      g1 += (y - mu) * x;
      h00 += w;
      h01 += w * x;
      h11 += w * x * x;
    }
    const double det = h00 * h11 - h01 * h01;
    if (std::abs(det) < 1e-12) break;
    const double da = (h11 * g0 - h01 * g1) / det;
    const double db = (h00 * g1 - h01 * g0) / det;
    a += da;
    b += db;
    if (std::abs(da) + std::abs(db) < 1e-10) {
      fit.converged = true;
      break;
    }
  }
  fit.intercept = a;
  fit.slope = b;
  fit.crossing_signal = b != 0.0 ? std::exp(-a / b) : 0.0;
  return fit;
}

std::vector<ExperimentRecord> run_power_curve(const ExperimentConfig& cfg) {
  cfg.validate();
  const Spectrum s = parse_spectrum_spec(cfg.spectrum_spec);
  const double d_eff = effective_dimension(s);

  double t = 0.0;
  const bool budget_ok = static_cast<long>(s.dim()) <= kSkipDim;
  if (budget_ok) {
    t = solve_threshold_mc(s, cfg.p, cfg.threshold_samples,
                           SeedSpec{cfg.master_seed, mix64(0x74687265ULL)})
            .t;
  }

  std::vector<SweepPoint> points;
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    SweepPoint pt;
    pt.point = static_cast<long>(i);
    pt.n = cfg.n_grid[i];
    pt.spectrum = &s;
    pt.d_eff = d_eff;
    pt.t = t;
    pt.skipped = !budget_ok;
    points.push_back(pt);
  }

  return run_sweep(cfg, points, StatisticName::signed_triangles, /*with_null=*/true,
                   [&](const SweepPoint& pt, const std::string& hyp, SeedSpec seed) {
                     const auto n = static_cast<std::size_t>(pt.n);
                     const GraphSample g = hyp == "alt"
                                               ? sample_alt_graph(cfg, *pt.spectrum, pt, seed)
                                               : sample_er(n, cfg.p, seed);
                     return signed_triangles(g);
                   });
}

std::vector<ExperimentRecord> run_phase_diagram(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<Spectrum> spectra;
  spectra.reserve(cfg.gamma_grid.size());
  std::vector<double> thresholds(cfg.gamma_grid.size(), 0.0);
  for (std::size_t gi = 0; gi < cfg.gamma_grid.size(); ++gi) {
    spectra.push_back(Spectrum::power_law(static_cast<std::size_t>(cfg.family_d),
                                          cfg.gamma_grid[gi]));
    thresholds[gi] = solve_threshold_mc(spectra[gi], cfg.p, cfg.threshold_samples,
                                        SeedSpec{cfg.master_seed, mix64(0x74687265ULL + gi)})
                         .t;
  }

  std::vector<SweepPoint> points;
  for (std::size_t gi = 0; gi < cfg.gamma_grid.size(); ++gi) {
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
      SweepPoint pt;
      pt.point = static_cast<long>(gi * cfg.n_grid.size() + ni);
      pt.n = cfg.n_grid[ni];
      pt.gamma = cfg.gamma_grid[gi];
      pt.spectrum = &spectra[gi];
      pt.d_eff = effective_dimension(spectra[gi]);
      pt.t = thresholds[gi];
      points.push_back(pt);
    }
  }

  return run_sweep(cfg, points, StatisticName::signed_triangles, /*with_null=*/true,
                   [&](const SweepPoint& pt, const std::string& hyp, SeedSpec seed) {
                     const auto n = static_cast<std::size_t>(pt.n);
                     const GraphSample g = hyp == "alt"
                                               ? sample_alt_graph(cfg, *pt.spectrum, pt, seed)
                                               : sample_er(n, cfg.p, seed);
                     return signed_triangles(g);
                   });
}

std::vector<ExperimentRecord> run_null_calibration(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<SweepPoint> points;
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    SweepPoint pt;
    pt.point = static_cast<long>(i);
    pt.n = cfg.n_grid[i];
    pt.d_eff = 1.0;  // no geometry under the null
    points.push_back(pt);
  }
  return run_sweep(
      cfg, points, StatisticName::signed_triangles, /*with_null=*/false,
      [&](const SweepPoint& pt, const std::string&, SeedSpec seed) {
        return signed_triangles(sample_er(static_cast<std::size_t>(pt.n), cfg.p, seed));
      },
      /*solo_label=*/"null");
}

std::vector<ExperimentRecord> run_wishart_vs_gaussian(const ExperimentConfig& cfg) {
  cfg.validate();
  const Spectrum s = parse_spectrum_spec(cfg.spectrum_spec);
  const double d_eff = effective_dimension(s);

  std::vector<SweepPoint> points;
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    SweepPoint pt;
    pt.point = static_cast<long>(i);
    pt.n = cfg.n_grid[i];
    pt.spectrum = &s;
    pt.d_eff = d_eff;
    pt.skipped = static_cast<long>(s.dim()) > kSkipDim;
    points.push_back(pt);
  }

  return run_sweep(cfg, points, StatisticName::trace_cube, /*with_null=*/true,
                   [&](const SweepPoint& pt, const std::string& hyp, SeedSpec seed) {
                     const auto n = static_cast<std::size_t>(pt.n);
                     const SymMatrixSample m = hyp == "alt"
                                                   ? sample_wishart(*pt.spectrum, n, seed)
                                                   : sample_gaussian_matrix(n, seed);
                     return trace_cube(m);
                   });
}

std::vector<Chi2ScanRow> run_chi2_scan(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string hash = config_hash(cfg);
  std::vector<Chi2ScanRow> rows;
  long point = 0;
  for (long n : cfg.n_grid) {
    for (double u : cfg.u_grid) {
      const auto start = std::chrono::steady_clock::now();
      Chi2Options opts;
      opts.a = cfg.chi2_a;
      opts.allow_unguarded = cfg.allow_unguarded;
      const Chi2Result res =
          chi2_truncated_mc(static_cast<std::size_t>(n), u, cfg.replicates,
                            SeedSpec{cfg.master_seed, record_stream_id(point, 0, "chi2")}, opts);
      Chi2ScanRow row;
      row.config_hash = hash;
      row.point = point;
      row.n = n;
      row.u = u;
      row.a = res.a;
      row.chi2 = res.chi2;
      row.chi2_stderr = res.chi2_stderr;
      row.tv_bound = res.tv().lower_bound;
      row.unguarded = res.unguarded;
      row.replicates = res.replicates;
      row.wall_time_ms = elapsed_ms(start);
      rows.push_back(row);
      ++point;
    }
  }
  if (!cfg.output_path.empty()) {
    std::ofstream os(cfg.output_path, std::ios_base::app);
    if (!os) throw std::runtime_error("cannot open results file: " + cfg.output_path);
    for (const Chi2ScanRow& r : rows) {
      json j{{"config_hash", r.config_hash},
             {"point", r.point},
             {"n", r.n},
             {"u", r.u},
             {"a", r.a},
             {"chi2", r.chi2},
             {"chi2_stderr", r.chi2_stderr},
             {"tv_bound", r.tv_bound},
             {"unguarded", r.unguarded},
             {"replicates", r.replicates},
             {"wall_time_ms", r.wall_time_ms}};
      os << j.dump() << '\n';
    }
  }
  return rows;
}

PeelDiagnostics run_peel_diagnostics(const Spectrum& s, const std::vector<long>& n_grid) {
  PeelDiagnostics out;
  const SpectrumSplit sp = split(s);
  out.degenerate = sp.degenerate;
  out.r = sp.r;
  out.d_eff = effective_dimension(s);
  if (sp.degenerate) return out;

  for (const PeelStep& step : peel_sequence(s, sp)) out.u_sequence.push_back(step.u_t);
  out.minus_comparison_dim = comparison_dimension(sp.alpha_minus);

  for (long n : n_grid) {
    const PeelBoundProxy proxy = peel_bound_proxy(s, n);
    PeelDiagnosticsRow row;
    row.n = n;
    row.n_cubed = static_cast<double>(n) * n * n;
    row.sum_term = proxy.sum_term;
    row.l3_term = proxy.l3_term;
    row.below_threshold = row.n_cubed < out.d_eff;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace geodetect
