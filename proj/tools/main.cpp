// Command-line front end: scenario construction from dB-domain flags or a
// flat JSON config, figure-reproduction presets, CSV emission.
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ehrelay/analysis.hpp"
#include "ehrelay/capacity_metrics.hpp"
#include "ehrelay/errors.hpp"
#include "ehrelay/monte_carlo.hpp"
#include "json.hpp"

using namespace ehrelay;

namespace {

double db2lin(double db) { return std::pow(10.0, db / 10.0); }

// Locale-independent numeric formatting for CSV cells.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
      out_ << (i ? "," : "") << header[i];
    out_ << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
    ++rows_;
  }

  const std::string& path() const { return path_; }
  std::size_t rows() const { return rows_; }

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t rows_ = 0;
};

struct Options {
  std::string config_path;
  std::string protocol = "ts";
  double ratio = 0.5;
  double snr_db = 20.0;
  double sir_db = 10.0;
  double gamma_th_db = 8.0;
  double eta = 1.0;
  std::string mu_csv = "0.6,0.4";
  std::vector<double> mu{0.6, 0.4};
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 42;
  unsigned workers = 0;
  std::string out_path;
  bool validate = false;
  std::string metric = "ergodic";
  int grid_points = 99;
  double tol = 1e-3;
  double snr_min = 0.0;
  double snr_max = 30.0;
  double snr_step = 5.0;
};

std::vector<double> parse_mu_list(const std::string& csv) {
  std::vector<double> out;
  if (csv.empty() || csv == "none") return out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad --mu entry: " + item);
    if (v < 0.0) throw std::invalid_argument("--mu entries must be >= 0");
    out.push_back(v);
  }
  return out;
}

// File values fill in anything the command line left at its default.
void apply_config_file(const CLI::App& app, Options& opt) {
  std::ifstream in(opt.config_path);
  if (!in) throw std::runtime_error("cannot read config file: " + opt.config_path);
  nlohmann::json j;
  in >> j;

  const auto unset = [&app](const std::string& flag) {
    return app.count(flag) == 0;
  };
  if (j.contains("protocol") && unset("--protocol")) opt.protocol = j["protocol"];
  if (j.contains("ratio") && unset("--ratio")) opt.ratio = j["ratio"];
  if (j.contains("snr_db") && unset("--snr-db")) opt.snr_db = j["snr_db"];
  if (j.contains("sir_db") && unset("--sir-db")) opt.sir_db = j["sir_db"];
  if (j.contains("gamma_th_db") && unset("--gamma-th-db"))
    opt.gamma_th_db = j["gamma_th_db"];
  if (j.contains("eta") && unset("--eta")) opt.eta = j["eta"];
  if (j.contains("mu") && unset("--mu")) opt.mu = j["mu"].get<std::vector<double>>();
  if (j.contains("trials") && unset("--trials")) opt.trials = j["trials"];
  if (j.contains("seed") && unset("--seed")) opt.seed = j["seed"];
  if (j.contains("workers") && unset("--workers")) opt.workers = j["workers"];
  if (j.contains("metric") && unset("--metric")) opt.metric = j["metric"];
  if (j.contains("grid_points") && unset("--grid-points"))
    opt.grid_points = j["grid_points"];
  if (j.contains("tol") && unset("--tol")) opt.tol = j["tol"];
  if (j.contains("out") && unset("--out")) opt.out_path = j["out"];
}

struct Scenario {
  ChannelConfig cfg;
  Protocol proto;
  double gamma_th = 0.0;
};

// Presets fix unit noise variances and unit mean channel gains; source and
// interferer powers then follow from the SNR/SIR ratios.
ChannelConfig build_config(double snr_db, double sir_db,
                           const std::vector<double>& mu_weights, double eta) {
  ChannelConfig cfg;
  cfg.source_power = db2lin(snr_db);
  cfg.efficiency = eta;
  double wsum = 0.0;
  for (double w : mu_weights) wsum += w;
  if (wsum > 0.0) {
    const double aggregate = cfg.source_power / db2lin(sir_db);
    for (double w : mu_weights) {
      if (w > 0.0) {
        cfg.interferer_powers.push_back(w / wsum * aggregate);
        cfg.mean_gain_interferers.push_back(1.0);
      }
    }
  }
  cfg.validate();
  return cfg;
}

Scenario build_scenario(const Options& opt) {
  Scenario s;
  s.cfg = build_config(opt.snr_db, opt.sir_db, opt.mu, opt.eta);
  if (opt.protocol != "ts" && opt.protocol != "ps")
    throw std::invalid_argument("--protocol must be ts or ps");
  s.proto.variant =
      opt.protocol == "ts" ? ProtocolVariant::TS : ProtocolVariant::PS;
  s.proto.ratio = opt.ratio;
  s.gamma_th = db2lin(opt.gamma_th_db);
  return s;
}

Metric parse_metric(const std::string& name) {
  if (name == "ergodic") return Metric::ergodic_throughput;
  if (name == "outage") return Metric::outage_throughput;
  throw std::invalid_argument("--metric must be ergodic or outage");
}

std::string default_out(const Options& opt, const std::string& stem) {
  return opt.out_path.empty() ? stem + ".csv" : opt.out_path;
}

std::vector<double> ratio_grid(int points) {
  if (points < 1 || points > 100000)
    throw std::invalid_argument("--grid-points out of range");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = static_cast<double>(i + 1) / (points + 1);
  return g;
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int run_outage(const Options& opt) {
  const Scenario s = build_scenario(opt);
  const EffectiveParams p = effective_params(s.cfg, s.proto);

  std::string method = "closed_form";
  double pout;
  try {
    pout = outage_probability(p, s.gamma_th, OutageMethod::ClosedForm);
  } catch (const conditioning_error& e) {
    std::cerr << "note: " << e.what() << "\n";
    pout = outage_probability(p, s.gamma_th, OutageMethod::Integral);
    method = "integral_fallback";
  }
  const double integral = outage_probability(p, s.gamma_th, OutageMethod::Integral);

  std::vector<std::string> header{"gamma_th_db", "gamma_th", "p_out",
                                  "p_out_method", "p_out_integral"};
  std::vector<std::string> cells{fmt(opt.gamma_th_db), fmt(s.gamma_th), fmt(pout),
                                 method, fmt(integral)};
  if (opt.validate) {
    const auto mc = mc_outage(s.cfg, s.proto, s.gamma_th, opt.trials, opt.seed,
                              opt.workers);
    header.insert(header.end(), {"mc_mean", "mc_std_error", "z_score"});
    const double z = mc.std_error > 0 ? (pout - mc.mean) / mc.std_error : 0.0;
    cells.insert(cells.end(), {fmt(mc.mean), fmt(mc.std_error), fmt(z)});
  }
  CsvWriter csv(default_out(opt, "outage"), header);
  csv.row(cells);
  std::cout << "outage: P_out = " << fmt(pout) << " (" << method
            << "), integral = " << fmt(integral) << " | seed=" << opt.seed
            << " | wrote " << csv.path() << "\n";
  return 0;
}

int run_ergodic(const Options& opt) {
  const Scenario s = build_scenario(opt);
  const EffectiveParams p = effective_params(s.cfg, s.proto);
  const CapacityResult c = ergodic_capacity(p);
  const double tput = throughput(s.proto, c);

  std::vector<std::string> header{"snr_db", "protocol", "ratio",
                                  "c_erg",  "t_erg",    "est_error"};
  std::vector<std::string> cells{fmt(opt.snr_db), opt.protocol, fmt(opt.ratio),
                                 fmt(c.value),    fmt(tput),    fmt(c.est_error)};
  if (opt.validate) {
    const auto mc = mc_ergodic(s.cfg, s.proto, opt.trials, opt.seed, opt.workers);
    header.insert(header.end(), {"mc_mean", "mc_std_error", "z_score"});
    const double z = mc.std_error > 0 ? (c.value - mc.mean) / mc.std_error : 0.0;
    cells.insert(cells.end(), {fmt(mc.mean), fmt(mc.std_error), fmt(z)});
  }
  CsvWriter csv(default_out(opt, "ergodic"), header);
  csv.row(cells);
  std::cout << "ergodic: C_erg = " << fmt(c.value) << " bits/s/Hz, T_erg = "
            << fmt(tput) << " | seed=" << opt.seed << " | wrote " << csv.path()
            << "\n";
  return 0;
}

int run_sweep(const Options& opt) {
  const Scenario s = build_scenario(opt);
  const Metric metric = parse_metric(opt.metric);
  const auto grid = ratio_grid(opt.grid_points);
  const SweepResult r =
      sweep_ratio(s.cfg, s.proto.variant, grid, metric, s.gamma_th);

  std::vector<std::string> header{
      s.proto.variant == ProtocolVariant::TS ? "alpha" : "theta", "throughput"};
  CsvWriter csv(default_out(opt, "sweep"), header);
  for (std::size_t i = 0; i < r.ratios.size(); ++i)
    csv.row({fmt(r.ratios[i]), fmt(r.values[i])});
  std::cout << "sweep: " << opt.metric << " max = " << fmt(r.max_value)
            << " at ratio " << fmt(r.argmax_ratio) << " | seed=" << opt.seed
            << " | wrote " << csv.path() << " (" << csv.rows() << " rows)\n";
  return 0;
}

int run_optimize(const Options& opt) {
  const Scenario s = build_scenario(opt);
  const Metric metric = parse_metric(opt.metric);
  const OptimizeResult r =
      optimize_ratio(s.cfg, s.proto.variant, metric, s.gamma_th, opt.tol);

  CsvWriter csv(default_out(opt, "optimize"),
                {"protocol", "metric", "ratio_opt", "value_opt", "multimodal"});
  csv.row({opt.protocol, opt.metric, fmt(r.ratio), fmt(r.value),
           r.multimodal_flag ? "1" : "0"});
  std::cout << "optimize: best " << opt.metric << " = " << fmt(r.value)
            << " at ratio " << fmt(r.ratio)
            << (r.multimodal_flag ? " (coarse scan saw multiple maxima)" : "")
            << " | seed=" << opt.seed << " | wrote " << csv.path() << "\n";
  return 0;
}

int run_compare(const Options& opt) {
  const Metric metric = parse_metric(opt.metric);
  const double gamma_th = db2lin(opt.gamma_th_db);

  CsvWriter csv(default_out(opt, "compare-protocols"),
                {"snr_db", "opt_t_ts", "opt_t_ps", "opt_alpha", "opt_theta"});
  double last_ts = 0.0, last_ps = 0.0;
  for (double snr = opt.snr_min; snr <= opt.snr_max + 1e-9; snr += opt.snr_step) {
    const ChannelConfig cfg = build_config(snr, opt.sir_db, opt.mu, opt.eta);
    const OptimizeResult ts =
        optimize_ratio(cfg, ProtocolVariant::TS, metric, gamma_th, opt.tol);
    const OptimizeResult ps =
        optimize_ratio(cfg, ProtocolVariant::PS, metric, gamma_th, opt.tol);
    csv.row({fmt(snr), fmt(ts.value), fmt(ps.value), fmt(ts.ratio), fmt(ps.ratio)});
    last_ts = ts.value;
    last_ps = ps.value;
  }
  std::cout << "compare-protocols (" << opt.metric << "): at " << fmt(opt.snr_max)
            << " dB TS = " << fmt(last_ts) << ", PS = " << fmt(last_ps)
            << " | seed=" << opt.seed << " | wrote " << csv.path() << " ("
            << csv.rows() << " rows)\n";
  return 0;
}

int run_schur(const Options& opt, const std::string& vectors_spec) {
  const Scenario s = build_scenario(opt);
  const Metric metric = parse_metric(opt.metric);

  std::vector<std::vector<double>> vectors;
  std::stringstream ss(vectors_spec);
  std::string part;
  while (std::getline(ss, part, ';'))
    if (!part.empty()) vectors.push_back(parse_mu_list(part));

  const SchurReport report =
      schur_order_check(s.cfg, vectors, s.proto, metric, s.gamma_th);

  CsvWriter csv(default_out(opt, "schur"),
                {"hi_index", "lo_index", "hi_value", "lo_value", "tolerance",
                 "holds"});
  for (const auto& c : report.comparisons)
    csv.row({fmt(static_cast<double>(c.hi_index)),
             fmt(static_cast<double>(c.lo_index)), fmt(c.hi_value),
             fmt(c.lo_value), fmt(c.tolerance), c.holds ? "1" : "0"});

  std::cout << "schur (" << opt.metric << "): ";
  for (std::size_t i = 0; i < report.metric_values.size(); ++i)
    std::cout << (i ? ", " : "") << "T[" << i << "]=" << fmt(report.metric_values[i]);
  std::cout << " | " << (report.all_hold ? "ordering holds" : "ORDERING VIOLATED")
            << " (" << report.incomparable.size() << " incomparable pairs)"
            << " | seed=" << opt.seed << " | wrote " << csv.path() << "\n";
  return report.all_hold ? 0 : 3;
}

int run_mc_validate(const Options& opt) {
  const Scenario s = build_scenario(opt);
  const EffectiveParams p = effective_params(s.cfg, s.proto);

  const double pout = outage_probability(p, s.gamma_th, OutageMethod::ClosedForm);
  const auto mc_out =
      mc_outage(s.cfg, s.proto, s.gamma_th, opt.trials, opt.seed, opt.workers);
  const CapacityResult cerg = ergodic_capacity(p);
  const auto mc_erg = mc_ergodic(s.cfg, s.proto, opt.trials, opt.seed, opt.workers);

  CsvWriter csv(default_out(opt, "mc-validate"),
                {"quantity", "analytic", "mc_mean", "mc_std_error", "trials",
                 "seed", "abs_diff", "within_3se"});
  const auto emit = [&csv, &opt](const std::string& name, double analytic,
                                 const MonteCarloEstimate& mc) {
    const double diff = std::abs(analytic - mc.mean);
    csv.row({name, fmt(analytic), fmt(mc.mean), fmt(mc.std_error),
             std::to_string(opt.trials), std::to_string(opt.seed), fmt(diff),
             diff <= 3.0 * mc.std_error ? "1" : "0"});
  };
  emit("outage_probability", pout, mc_out);
  emit("ergodic_capacity", cerg.value, mc_erg);

  std::cout << "mc-validate: outage |diff|/se = "
            << fmt(std::abs(pout - mc_out.mean) / mc_out.std_error)
            << ", ergodic |diff|/se = "
            << fmt(std::abs(cerg.value - mc_erg.mean) / mc_erg.std_error)
            << " | trials=" << opt.trials << " seed=" << opt.seed << " | wrote "
            << csv.path() << "\n";
  return 0;
}

// Figure presets: gamma_th 8 dB, eta 1, normalized means (0.6, 0.4), SIR
// 10 dB base with 5/15 dB companions, first-hop SNR 20 dB for figs 2-3.
int run_figure(const Options& opt, int n) {
  const double gamma_th = db2lin(8.0);
  const std::vector<double> mu_preset{0.6, 0.4};
  const double sir_base = 10.0;
  const std::vector<double> sir_extra{5.0, 15.0};

  if (n == 2 || n == 3) {
    const ProtocolVariant variant = n == 2 ? ProtocolVariant::TS : ProtocolVariant::PS;
    const char* rname = n == 2 ? "alpha" : "theta";
    const auto grid = ratio_grid(opt.grid_points);

    std::vector<std::string> header{rname,
                                    "t_erg",
                                    "t_out",
                                    "t_erg_sir5db",
                                    "t_out_sir5db",
                                    "t_erg_sir15db",
                                    "t_out_sir15db"};
    if (opt.validate)
      header.insert(header.end(),
                    {"mc_t_erg", "mc_t_erg_se", "mc_t_out", "mc_t_out_se"});

    std::vector<ChannelConfig> cfgs;
    cfgs.push_back(build_config(20.0, sir_base, mu_preset, 1.0));
    for (double sir : sir_extra) cfgs.push_back(build_config(20.0, sir, mu_preset, 1.0));

    CsvWriter csv(default_out(opt, "figure" + std::to_string(n)), header);
    for (double r : grid) {
      std::vector<std::string> cells{fmt(r)};
      for (const ChannelConfig& cfg : cfgs) {
        cells.push_back(
            fmt(throughput_at_ratio(cfg, variant, r, Metric::ergodic_throughput, gamma_th)));
        cells.push_back(
            fmt(throughput_at_ratio(cfg, variant, r, Metric::outage_throughput, gamma_th)));
      }
      if (opt.validate) {
        const Protocol proto{variant, r};
        const double scale = variant == ProtocolVariant::TS ? 1.0 - r : 1.0;
        const auto erg = mc_ergodic(cfgs[0], proto, opt.trials, opt.seed, opt.workers);
        const auto out =
            mc_outage(cfgs[0], proto, gamma_th, opt.trials, opt.seed, opt.workers);
        const double rate = 0.5 * std::log2(1.0 + gamma_th);
        cells.insert(cells.end(),
                     {fmt(scale * erg.mean), fmt(scale * erg.std_error),
                      fmt(scale * rate * (1.0 - out.mean)),
                      fmt(scale * rate * out.std_error)});
      }
      csv.row(cells);
    }
    std::cout << "figure " << n << ": " << csv.rows() << " " << rname
              << " points, SIR {5,10,15} dB, SNR 20 dB | seed=" << opt.seed
              << " | wrote " << csv.path() << "\n";
    return 0;
  }

  if (n == 4 || n == 5) {
    const Metric metric = n == 4 ? Metric::ergodic_throughput : Metric::outage_throughput;
    std::vector<std::string> header{"snr_db",        "opt_t_ts",
                                    "opt_t_ps",      "opt_alpha",
                                    "opt_theta",     "opt_t_ts_sir5db",
                                    "opt_t_ps_sir5db", "opt_t_ts_sir15db",
                                    "opt_t_ps_sir15db"};
    if (opt.validate)
      header.insert(header.end(), {"mc_t_ts", "mc_t_ts_se", "mc_t_ps", "mc_t_ps_se"});

    CsvWriter csv(default_out(opt, "figure" + std::to_string(n)), header);
    for (double snr = opt.snr_min; snr <= opt.snr_max + 1e-9; snr += opt.snr_step) {
      std::vector<std::string> cells{fmt(snr)};
      OptimizeResult ts10, ps10;
      bool first = true;
      for (double sir : {sir_base, sir_extra[0], sir_extra[1]}) {
        const ChannelConfig cfg = build_config(snr, sir, mu_preset, 1.0);
        const OptimizeResult ts =
            optimize_ratio(cfg, ProtocolVariant::TS, metric, gamma_th, opt.tol);
        const OptimizeResult ps =
            optimize_ratio(cfg, ProtocolVariant::PS, metric, gamma_th, opt.tol);
        cells.push_back(fmt(ts.value));
        cells.push_back(fmt(ps.value));
        if (first) {
          cells.push_back(fmt(ts.ratio));
          cells.push_back(fmt(ps.ratio));
          ts10 = ts;
          ps10 = ps;
          first = false;
        }
      }
      if (opt.validate) {
        const ChannelConfig cfg = build_config(snr, sir_base, mu_preset, 1.0);
        const double rate = 0.5 * std::log2(1.0 + gamma_th);
        const auto emit_mc = [&](ProtocolVariant v, double ratio) {
          const Protocol proto{v, ratio};
          const double scale = v == ProtocolVariant::TS ? 1.0 - ratio : 1.0;
          if (metric == Metric::ergodic_throughput) {
            const auto mc = mc_ergodic(cfg, proto, opt.trials, opt.seed, opt.workers);
            cells.push_back(fmt(scale * mc.mean));
            cells.push_back(fmt(scale * mc.std_error));
          } else {
            const auto mc =
                mc_outage(cfg, proto, gamma_th, opt.trials, opt.seed, opt.workers);
            cells.push_back(fmt(scale * rate * (1.0 - mc.mean)));
            cells.push_back(fmt(scale * rate * mc.std_error));
          }
        };
        emit_mc(ProtocolVariant::TS, ts10.ratio);
        emit_mc(ProtocolVariant::PS, ps10.ratio);
      }
      csv.row(cells);
    }
    std::cout << "figure " << n << ": optimal "
              << (n == 4 ? "T_erg" : "T_out") << " vs SNR, SIR {5,10,15} dB"
              << " | seed=" << opt.seed << " | wrote " << csv.path() << "\n";
    return 0;
  }

  // Figures 6 and 7: three interference power distributions with equal
  // aggregate power; TS alpha = 0.2 / PS theta = 0.6, SIR 10 dB.
  const ProtocolVariant variant = n == 6 ? ProtocolVariant::TS : ProtocolVariant::PS;
  const double ratio = n == 6 ? 0.2 : 0.6;
  const std::vector<std::vector<double>> mu_sets = {
      {1.0, 0.0, 0.0, 0.0, 0.0}, {0.6, 0.4, 0.0, 0.0, 0.0},
      {0.2, 0.2, 0.2, 0.2, 0.2}};

  std::vector<std::string> header{"snr_db",    "t_erg_mu1", "t_erg_mu2",
                                  "t_erg_mu3", "t_out_mu1", "t_out_mu2",
                                  "t_out_mu3"};
  if (opt.validate)
    for (const char* base : {"mc_t_erg_mu1", "mc_t_erg_mu2", "mc_t_erg_mu3",
                             "mc_t_out_mu1", "mc_t_out_mu2", "mc_t_out_mu3"}) {
      header.push_back(base);
      header.push_back(std::string(base) + "_se");
    }

  CsvWriter csv(default_out(opt, "figure" + std::to_string(n)), header);
  for (double snr = opt.snr_min; snr <= opt.snr_max + 1e-9; snr += 2.5) {
    std::vector<std::string> cells{fmt(snr)};
    std::vector<ChannelConfig> cfgs;
    for (const auto& mu : mu_sets) cfgs.push_back(build_config(snr, sir_base, mu, 1.0));
    for (const ChannelConfig& cfg : cfgs)
      cells.push_back(
          fmt(throughput_at_ratio(cfg, variant, ratio, Metric::ergodic_throughput, gamma_th)));
    for (const ChannelConfig& cfg : cfgs)
      cells.push_back(
          fmt(throughput_at_ratio(cfg, variant, ratio, Metric::outage_throughput, gamma_th)));
    if (opt.validate) {
      const Protocol proto{variant, ratio};
      const double scale = variant == ProtocolVariant::TS ? 1.0 - ratio : 1.0;
      const double rate = 0.5 * std::log2(1.0 + gamma_th);
      for (const ChannelConfig& cfg : cfgs) {
        const auto mc = mc_ergodic(cfg, proto, opt.trials, opt.seed, opt.workers);
        cells.push_back(fmt(scale * mc.mean));
        cells.push_back(fmt(scale * mc.std_error));
      }
      for (const ChannelConfig& cfg : cfgs) {
        const auto mc = mc_outage(cfg, proto, gamma_th, opt.trials, opt.seed, opt.workers);
        cells.push_back(fmt(scale * rate * (1.0 - mc.mean)));
        cells.push_back(fmt(scale * rate * mc.std_error));
      }
    }
    csv.row(cells);
  }
  std::cout << "figure " << n << ": throughput under three interference "
            << "distributions | seed=" << opt.seed << " | wrote " << csv.path()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Ergodic/outage capacity and throughput of an "
               "energy-harvesting DF relay under co-channel interference"};
  app.require_subcommand(1);

  app.add_option("--config", opt.config_path, "JSON config file (flags override)");
  app.add_option("--protocol", opt.protocol, "Harvesting protocol: ts | ps")
      ->capture_default_str();
  app.add_option("--ratio", opt.ratio, "Harvesting ratio alpha (TS) or theta (PS)")
      ->capture_default_str();
  app.add_option("--snr-db", opt.snr_db, "First-hop average SNR [dB]")
      ->capture_default_str();
  app.add_option("--sir-db", opt.sir_db, "Average SIR at the relay [dB]")
      ->capture_default_str();
  app.add_option("--gamma-th-db", opt.gamma_th_db, "Outage SNR threshold [dB]")
      ->capture_default_str();
  app.add_option("--eta", opt.eta, "Energy conversion efficiency in [0,1]")
      ->capture_default_str();
  app.add_option("--mu", opt.mu_csv,
                 "Comma list of normalized interference weights ('' or 'none' "
                 "for no interferers)")
      ->capture_default_str();
  app.add_option("--trials", opt.trials, "Monte Carlo trials")->capture_default_str();
  app.add_option("--seed", opt.seed, "Monte Carlo master seed")->capture_default_str();
  app.add_option("--workers", opt.workers, "MC worker threads (0 = hardware)")
      ->capture_default_str();
  app.add_option("--out", opt.out_path, "Output CSV path (default <subcommand>.csv)");
  app.add_flag("--validate", opt.validate, "Also emit Monte Carlo columns");
  app.add_option("--metric", opt.metric, "Throughput metric: ergodic | outage")
      ->capture_default_str();
  app.add_option("--grid-points", opt.grid_points, "Ratio grid size")
      ->capture_default_str();
  app.add_option("--tol", opt.tol, "Optimizer bracket tolerance")
      ->capture_default_str();
  app.add_option("--snr-min", opt.snr_min, "SNR grid start [dB]")
      ->capture_default_str();
  app.add_option("--snr-max", opt.snr_max, "SNR grid end [dB]")->capture_default_str();
  app.add_option("--snr-step", opt.snr_step, "SNR grid step [dB]")
      ->capture_default_str();

  auto* outage_cmd = app.add_subcommand("outage", "Outage probability at gamma_th");
  auto* ergodic_cmd = app.add_subcommand("ergodic", "Ergodic capacity and throughput");
  auto* sweep_cmd = app.add_subcommand("sweep", "Throughput over a ratio grid");
  auto* optimize_cmd = app.add_subcommand("optimize", "Optimal harvesting ratio");
  auto* compare_cmd =
      app.add_subcommand("compare-protocols", "Optimal TS vs PS over an SNR grid");
  auto* schur_cmd =
      app.add_subcommand("schur", "Majorization ordering of throughput");
  auto* mc_cmd = app.add_subcommand("mc-validate",
                                    "Analytic vs Monte Carlo cross-check");
  auto* figure_cmd = app.add_subcommand("figure", "Reproduce a paper-style figure");

  int figure_n = 2;
  figure_cmd->add_option("n", figure_n, "Figure number (2-7)")
      ->required()
      ->check(CLI::Range(2, 7));
  std::string schur_vectors =
      "1,0,0,0,0;0.6,0.4,0,0,0;0.2,0.2,0.2,0.2,0.2";
  schur_cmd->add_option("--mu-vectors", schur_vectors,
                        "Semicolon-separated equal-sum weight vectors")
      ->capture_default_str();

  for (auto* sub : {outage_cmd, ergodic_cmd, sweep_cmd, optimize_cmd, compare_cmd,
                    schur_cmd, mc_cmd, figure_cmd})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!opt.config_path.empty()) apply_config_file(app, opt);
    if (app.count("--mu") > 0) opt.mu = parse_mu_list(opt.mu_csv);

    if (*outage_cmd) return run_outage(opt);
    if (*ergodic_cmd) return run_ergodic(opt);
    if (*sweep_cmd) return run_sweep(opt);
    if (*optimize_cmd) return run_optimize(opt);
    if (*compare_cmd) return run_compare(opt);
    if (*schur_cmd) return run_schur(opt, schur_vectors);
    if (*mc_cmd) return run_mc_validate(opt);
    if (*figure_cmd) return run_figure(opt, figure_n);
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
