// Command-line frontend. Everything goes through the public C API in
// tensorgp/tensorgp.h; no core headers are included here.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tensorgp/tensorgp.h"

namespace {

int status_to_exit(tgp_status st) {
  if (st == TGP_OK) return 0;
  if (st == TGP_ERR_NUMERIC) return 2;
  return 1;  // validation and IO problems
}

[[noreturn]] void die(tgp_status st, const std::string& context) {
  std::fprintf(stderr, "tensorgp: %s: %s\n", context.c_str(), tgp_last_error());
  std::exit(status_to_exit(st));
}

void check(tgp_status st, const std::string& context) {
  if (st != TGP_OK) die(st, context);
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    try {
      out.push_back(std::stod(s.substr(start, comma - start)));
    } catch (...) {
      std::fprintf(stderr, "tensorgp: bad %s value '%s'\n", what.c_str(), s.c_str());
      std::exit(1);
    }
    start = comma + 1;
  }
  return out;
}

std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t x = s.find('x', start);
    if (x == std::string::npos) x = s.size();
    try {
      out.push_back(std::stoi(s.substr(start, x - start)));
    } catch (...) {
      std::fprintf(stderr, "tensorgp: bad --dims '%s' (want e.g. 2x50x216)\n", s.c_str());
      std::exit(1);
    }
    start = x + 1;
  }
  return out;
}

std::string out_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// Output directory priority: --out flag, then TENSORGP_OUT_DIR, then cwd.
std::string resolve_out_dir(const std::string& flag_value) {
  std::string dir = flag_value;
  if (dir.empty()) {
    const char* env = std::getenv("TENSORGP_OUT_DIR");
    dir = env ? env : ".";
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::fprintf(stderr, "tensorgp: cannot create output directory %s\n", dir.c_str());
    std::exit(1);
  }
  return dir;
}

struct CommonRunFlags {
  std::string config_path;
  std::string model;
  std::string out_dir;
  long long iters = -1;
  long long seed = -1;
  long long t0 = -1;
  std::vector<std::string> overrides;
};

void add_common_flags(CLI::App* cmd, CommonRunFlags& f) {
  cmd->add_option("--config", f.config_path, "run configuration file");
  cmd->add_option("--model", f.model, "nested or nonnested");
  cmd->add_option("--iters", f.iters, "number of sweeps");
  cmd->add_option("--seed", f.seed, "chain seed");
  cmd->add_option("--t0", f.t0, "lookback length for the nested model");
  cmd->add_option("--set", f.overrides, "extra config overrides, section.key=value")
      ->take_all();
  cmd->add_option("--out", f.out_dir, "output directory (default $TENSORGP_OUT_DIR or .)");
}

tgp_config* build_config(const CommonRunFlags& f) {
  tgp_config* cfg = nullptr;
  if (!f.config_path.empty())
    check(tgp_config_read(f.config_path.c_str(), &cfg), "reading " + f.config_path);
  else
    check(tgp_config_create(&cfg), "creating configuration");
  if (!f.model.empty()) check(tgp_config_set(cfg, "run.model", f.model.c_str()), "--model");
  if (f.iters >= 0)
    check(tgp_config_set(cfg, "run.iterations", std::to_string(f.iters).c_str()), "--iters");
  if (f.seed >= 0)
    check(tgp_config_set(cfg, "run.seed", std::to_string(f.seed).c_str()), "--seed");
  if (f.t0 >= 0) check(tgp_config_set(cfg, "run.t0", std::to_string(f.t0).c_str()), "--t0");
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "tensorgp: --set wants section.key=value, got '%s'\n", kv.c_str());
      std::exit(1);
    }
    check(tgp_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()),
          "--set " + kv);
  }
  return cfg;
}

void write_run_meta(const std::string& dir, const tgp_config* cfg, double burnin,
                    const std::string& extra) {
  std::ofstream f(out_path(dir, "run_meta.txt"));
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(tgp_config_hash(cfg)));
  long long seed = 0;
  tgp_config_get_int(cfg, "run.seed", &seed);
  f << "seed = " << seed << "\n";
  f << "config_hash = " << hash << "\n";
  f << "burnin_frac = " << burnin << "\n";
  if (!extra.empty()) f << extra;
}

// Writes per-chain traces plus the pooled summary; reports are freed here.
void emit_outputs(std::vector<tgp_report*>& reports, tgp_config* cfg, const std::string& dir) {
  if (reports.size() == 1) {
    check(tgp_report_write_trace(reports[0], out_path(dir, "trace.csv").c_str()),
          "writing trace");
  } else {
    for (size_t i = 0; i < reports.size(); ++i)
      check(tgp_report_write_trace(
                reports[i], out_path(dir, "trace_chain" + std::to_string(i) + ".csv").c_str()),
            "writing trace");
  }
  tgp_summary* sum = nullptr;
  check(tgp_reports_summarize(const_cast<const tgp_report* const*>(reports.data()),
                              static_cast<int>(reports.size()), 0.5, &sum),
        "summarising");
  check(tgp_summary_write(sum, out_path(dir, "summary.csv").c_str(),
                          out_path(dir, "summary.txt").c_str()),
        "writing summary");
  check(tgp_config_write(cfg, out_path(dir, "config_used.cfg").c_str()), "writing config copy");
  write_run_meta(dir, cfg, 0.5, "");

  // Galactic conversion table for 2-d input spaces, from the s_test marginals
  // when present.
  double s1_mode = 0.0;
  if (tgp_summary_lookup(sum, "s1_test", "mode", &s1_mode) == TGP_OK) {
    double lo = 0, hi = 0, unit = 0, omega = 0;
    tgp_summary_lookup(sum, "s1_test", "hpd_lo", &lo);
    tgp_summary_lookup(sum, "s1_test", "hpd_hi", &hi);
    std::ofstream g(out_path(dir, "galactic.txt"));
    g << "# galactic-unit conversion (solar radius 8 kpc, circular speed 220 km/s)\n";
    if (tgp_galactic_convert(s1_mode, &unit, &omega) == TGP_OK) {
      g << "s1_mode = " << s1_mode << "\n";
      g << "length_unit_kpc = " << unit << "\n";
      g << "omega_bar_kms_kpc = " << omega << "\n";
    }
    double u_lo = 0, o_lo = 0, u_hi = 0, o_hi = 0;
    if (hi > 0 && tgp_galactic_convert(hi, &u_hi, &o_hi) == TGP_OK &&
        tgp_galactic_convert(lo, &u_lo, &o_lo) == TGP_OK) {
      g << "omega_bar_hpd95 = [" << o_lo << ", " << o_hi << "]\n";
    }
    double a_lo = 0, a_hi = 0;
    if (tgp_summary_lookup(sum, "s2_test", "hpd_lo", &a_lo) == TGP_OK &&
        tgp_summary_lookup(sum, "s2_test", "hpd_hi", &a_hi) == TGP_OK) {
      g << "bar_angle_deg_hpd95 = [" << a_lo * 57.295779513082321 << ", "
        << a_hi * 57.295779513082321 << "]\n";
    }
  }
  tgp_summary_free(sum);
  for (auto* r : reports) tgp_report_free(r);
  reports.clear();
}

int cmd_train(const std::string& data_path, const CommonRunFlags& flags, long long chains_flag) {
  const std::string dir = resolve_out_dir(flags.out_dir);
  tgp_dataset* ds = nullptr;
  check(tgp_dataset_read(data_path.c_str(), &ds), "reading " + data_path);
  tgp_config* cfg = build_config(flags);
  if (chains_flag >= 1)
    check(tgp_config_set(cfg, "run.chains", std::to_string(chains_flag).c_str()), "--chains");

  long long n_chains = 1;
  tgp_config_get_int(cfg, "run.chains", &n_chains);

  std::vector<tgp_report*> reports(n_chains, nullptr);
  std::vector<tgp_status> statuses(n_chains, TGP_OK);
  std::vector<std::thread> workers;
  for (long long i = 0; i < n_chains; ++i)
    workers.emplace_back([&, i] { statuses[i] = tgp_train(ds, cfg, i, &reports[i]); });
  for (auto& w : workers) w.join();
  for (long long i = 0; i < n_chains; ++i)
    if (statuses[i] != TGP_OK) die(statuses[i], "chain " + std::to_string(i));

  emit_outputs(reports, cfg, dir);
  std::printf("train: wrote %s\n", dir.c_str());
  tgp_config_free(cfg);
  tgp_dataset_free(ds);
  return 0;
}

int cmd_predict(const std::string& data_path, const std::string& test_path,
                const std::string& scheme, const std::string& summary_path,
                const std::string& summary_kind, const std::string& bounds,
                const CommonRunFlags& flags) {
  const std::string dir = resolve_out_dir(flags.out_dir);
  tgp_dataset* train = nullptr;
  tgp_dataset* test = nullptr;
  check(tgp_dataset_read(data_path.c_str(), &train), "reading " + data_path);
  check(tgp_dataset_read(test_path.c_str(), &test), "reading " + test_path);
  tgp_config* cfg = build_config(flags);
  if (!bounds.empty()) check(tgp_config_set(cfg, "predict.bounds", bounds.c_str()), "--bounds");

  tgp_report* rep = nullptr;
  if (scheme == "joint") {
    check(tgp_predict_joint(train, test, cfg, 0, &rep), "joint prediction");
  } else if (scheme == "modal") {
    if (summary_path.empty()) {
      std::fprintf(stderr, "tensorgp: --scheme modal needs --summary from a training run\n");
      return 1;
    }
    tgp_summary* sum = nullptr;
    check(tgp_summary_read(summary_path.c_str(), &sum), "reading " + summary_path);
    check(tgp_predict_modal(train, test, cfg, sum, summary_kind == "mean" ? 1 : 0, 0, &rep),
          "modal prediction");
    tgp_summary_free(sum);
  } else {
    std::fprintf(stderr, "tensorgp: --scheme must be joint or modal\n");
    return 1;
  }

  std::vector<tgp_report*> reports{rep};
  emit_outputs(reports, cfg, dir);
  std::printf("predict (%s): wrote %s\n", scheme.c_str(), dir.c_str());
  tgp_config_free(cfg);
  tgp_dataset_free(train);
  tgp_dataset_free(test);
  return 0;
}

int cmd_synth(const std::string& dims_str, long long d, const std::string& q_str,
              long long seed, const std::string& spacing_str, const std::string& center_str,
              const std::string& discontinuity, double regime_factor,
              const std::string& plant_str, const std::string& sigma_str, double ar1,
              const std::string& out_file) {
  tgp_synth_opts opt;
  tgp_synth_opts_init(&opt);

  const auto dims = parse_dims(dims_str);
  if (dims.size() < 2 || dims.size() > TGP_MAX_ORDER) {
    std::fprintf(stderr, "tensorgp: --dims needs 2..%d axes\n", TGP_MAX_ORDER);
    return 1;
  }
  opt.k = static_cast<int>(dims.size());
  for (size_t i = 0; i < dims.size(); ++i) opt.dims[i] = dims[i];
  opt.design_dim = static_cast<int>(d);
  const auto q = parse_list(q_str, "--q");
  if (static_cast<long long>(q.size()) != d) {
    std::fprintf(stderr, "tensorgp: --q needs %lld values\n", d);
    return 1;
  }
  for (size_t i = 0; i < q.size(); ++i) opt.q[i] = q[i];
  opt.seed = static_cast<uint64_t>(seed);
  if (!spacing_str.empty()) {
    const auto sp = parse_list(spacing_str, "--spacing");
    for (size_t i = 0; i < sp.size() && i < TGP_MAX_ORDER; ++i) opt.spacing[i] = sp[i];
  }
  if (!center_str.empty()) {
    const auto ce = parse_list(center_str, "--center");
    for (size_t i = 0; i < ce.size() && i < TGP_MAX_ORDER; ++i) opt.center[i] = ce[i];
  }
  if (!discontinuity.empty()) {
    if (discontinuity != "two-regime") {
      std::fprintf(stderr, "tensorgp: --discontinuity supports only 'two-regime'\n");
      return 1;
    }
    opt.two_regime = 1;
    opt.regime_q_factor = regime_factor;
  }
  if (!plant_str.empty()) {
    const auto p = parse_list(plant_str, "--plant");
    if (static_cast<long long>(p.size()) != d) {
      std::fprintf(stderr, "tensorgp: --plant needs %lld coordinates\n", d);
      return 1;
    }
    opt.has_plant = 1;
    for (size_t i = 0; i < p.size(); ++i) opt.plant[i] = p[i];
  }
  if (!sigma_str.empty()) {
    const auto s = parse_list(sigma_str, "--sigma");
    if (s.size() != 3) {
      std::fprintf(stderr, "tensorgp: --sigma wants sigma11,sigma22,rho\n");
      return 1;
    }
    opt.sigma11 = s[0];
    opt.sigma22 = s[1];
    opt.rho = s[2];
  }
  opt.ar1 = ar1;

  tgp_dataset* ds = nullptr;
  check(tgp_synth(&opt, &ds), "generating data");
  check(tgp_dataset_write(ds, out_file.c_str()), "writing " + out_file);
  std::printf("synth: wrote %s\n", out_file.c_str());

  if (opt.has_plant) {
    // also emit the train/test split for prediction workflows
    tgp_dataset* train = nullptr;
    tgp_dataset* test = nullptr;
    check(tgp_dataset_split_last(ds, &train, &test), "splitting planted slice");
    const std::filesystem::path p(out_file);
    const std::string stem = (p.parent_path() / p.stem()).string();
    const std::string ext = p.extension().string().empty() ? ".csv" : p.extension().string();
    check(tgp_dataset_write(train, (stem + "_train" + ext).c_str()), "writing train split");
    check(tgp_dataset_write(test, (stem + "_test" + ext).c_str()), "writing test split");
    std::printf("synth: wrote %s_train%s and %s_test%s\n", stem.c_str(), ext.c_str(),
                stem.c_str(), ext.c_str());
    tgp_dataset_free(train);
    tgp_dataset_free(test);
  }
  tgp_dataset_free(ds);
  return 0;
}

int cmd_modelcheck(const std::string& data_path, const std::string& summary_path,
                   const std::string& slices, const std::string& summary_kind,
                   const CommonRunFlags& flags) {
  const std::string dir = resolve_out_dir(flags.out_dir);
  tgp_dataset* ds = nullptr;
  check(tgp_dataset_read(data_path.c_str(), &ds), "reading " + data_path);
  tgp_summary* sum = nullptr;
  check(tgp_summary_read(summary_path.c_str(), &sum), "reading " + summary_path);
  tgp_config* cfg = build_config(flags);
  if (flags.iters >= 0)
    check(tgp_config_set(cfg, "modelcheck.iterations", std::to_string(flags.iters).c_str()),
          "--iters");

  int lo = 0, hi = 0;
  const auto colon = slices.find(':');
  try {
    if (colon == std::string::npos) {
      lo = hi = std::stoi(slices);
    } else {
      lo = std::stoi(slices.substr(0, colon));
      hi = std::stoi(slices.substr(colon + 1));
    }
  } catch (...) {
    lo = 1;
    hi = 0;
  }
  if (lo < 1 || hi < lo) {
    std::fprintf(stderr, "tensorgp: --slices wants N or LO:HI with 1 <= LO <= HI\n");
    return 1;
  }

  const int use_mean = summary_kind == "mean" ? 1 : 0;
  for (int s = lo; s <= hi; ++s) {
    const std::string base = out_path(dir, "slice_" + std::to_string(s));
    double r = 0, rmse = 0, slope = 0;
    check(tgp_model_check(ds, cfg, sum, use_mean, s, (base + ".csv").c_str(),
                          (base + "_stats.txt").c_str(), &r, &rmse, &slope),
          "slice " + std::to_string(s));
    std::printf("modelcheck slice %d: r=%.4f rmse=%.4g slope=%.4f\n", s, r, rmse, slope);
  }
  tgp_config_free(cfg);
  tgp_summary_free(sum);
  tgp_dataset_free(ds);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tensor-variate GP learning, inverse prediction and model checking"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "learn GP parameters from a dataset");
  std::string train_data;
  long long train_chains = -1;
  CommonRunFlags train_flags;
  train->add_option("--data", train_data, "dataset file")->required();
  train->add_option("--chains", train_chains, "independent seeded chains run concurrently");
  add_common_flags(train, train_flags);

  // predict
  auto* predict = app.add_subcommand("predict", "infer the test design point two ways");
  std::string pr_data, pr_test, pr_scheme = "joint", pr_summary, pr_kind = "mode", pr_bounds;
  CommonRunFlags pr_flags;
  predict->add_option("--data", pr_data, "training dataset")->required();
  predict->add_option("--test", pr_test, "test dataset (one slice)")->required();
  predict->add_option("--scheme", pr_scheme, "joint or modal");
  predict->add_option("--summary", pr_summary, "summary.csv of a training run (modal scheme)");
  predict->add_option("--summary-kind", pr_kind, "mode or mean (modal scheme)");
  predict->add_option("--bounds", pr_bounds, "uniform prior box, lo:hi per axis");
  add_common_flags(predict, pr_flags);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  std::string sy_dims = "2x10x64", sy_q = "3800,72", sy_spacing, sy_center, sy_disc, sy_plant,
              sy_sigma, sy_out = "synth.csv";
  long long sy_d = 2, sy_seed = 1;
  double sy_regime_factor = 16.0, sy_ar1 = 0.3;
  synth->add_option("--dims", sy_dims, "tensor dims, e.g. 2x50x216");
  synth->add_option("--d", sy_d, "input-space dimension");
  synth->add_option("--q", sy_q, "true smoothness per axis");
  synth->add_option("--seed", sy_seed, "generator seed");
  synth->add_option("--spacing", sy_spacing, "design grid spacing per axis");
  synth->add_option("--center", sy_center, "design grid centre per axis");
  synth->add_option("--discontinuity", sy_disc, "'two-regime' for a sharp kernel flip");
  synth->add_option("--regime-factor", sy_regime_factor, "smoothness multiplier, second regime");
  synth->add_option("--plant", sy_plant, "extra slice at this design point (test planting)");
  synth->add_option("--sigma", sy_sigma, "sigma11,sigma22,rho of the leading 2-mode");
  synth->add_option("--ar1", sy_ar1, "middle-mode correlation decay");
  synth->add_option("--out", sy_out, "output file (.csv or .bin)");

  // modelcheck
  auto* mc = app.add_subcommand("modelcheck", "held-slice forward prediction checks");
  std::string mc_data, mc_summary, mc_slices, mc_kind = "mode";
  CommonRunFlags mc_flags;
  mc->add_option("--data", mc_data, "dataset file")->required();
  mc->add_option("--summary", mc_summary, "summary.csv of a training run")->required();
  mc->add_option("--slices", mc_slices, "slice N or range LO:HI (1-based)")->required();
  mc->add_option("--summary-kind", mc_kind, "mode or mean");
  add_common_flags(mc, mc_flags);

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) return cmd_train(train_data, train_flags, train_chains);
  if (predict->parsed())
    return cmd_predict(pr_data, pr_test, pr_scheme, pr_summary, pr_kind, pr_bounds, pr_flags);
  if (synth->parsed())
    return cmd_synth(sy_dims, sy_d, sy_q, sy_seed, sy_spacing, sy_center, sy_disc,
                     sy_regime_factor, sy_plant, sy_sigma, sy_ar1, sy_out);
  if (mc->parsed()) return cmd_modelcheck(mc_data, mc_summary, mc_slices, mc_kind, mc_flags);
  return 1;
}
