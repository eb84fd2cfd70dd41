#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace tgp {

enum class ModelFlavour { Nonnested, Nested };
enum class SigmaPriorKind { Jeffreys, Gaussian };

// Optional Gaussian prior on a scalar block; flat when `gaussian` is false.
struct PriorSpec {
  bool gaussian = false;
  double mean = 0.0;
  double sd = 1.0;
};

// Run configuration. Axis-indexed entries (ell0, v_ell, ...) may hold one
// value (broadcast over axes) or d values; resolve_axes() expands them once
// the dataset's input dimension is known. Negative variances mean "derive the
// default from the corresponding seed/prior scale".
//
// File format: flat `key = value` lines under [section] headers; unknown
// sections or keys are errors. See the README for the full key list.
struct RunConfig {
  // [run]
  ModelFlavour flavour = ModelFlavour::Nonnested;
  int iterations = 10000;
  uint64_t seed = 1;
  int t0 = 100;
  double burnin_frac = 0.5;
  int chains = 1;

  // [model] 1-based mode indices; 0 means "pick the default".
  int kernel_mode = 0;  // default: last mode
  int direct_mode = 0;  // default: first mode when it has size 2, else none
  static constexpr int kNoDirectMode = -1;

  // [init]
  bool ell0_auto = false;  // seed ell from the median squared design spacing
  std::vector<double> ell0{1.0};
  std::vector<double> a0{1.0};
  std::vector<double> delta0{1.0};
  double sigma11_0 = 1.0;
  double sigma22_0 = 1.0;
  double rho_0 = 0.0;

  // [proposals] variances
  std::vector<double> v_ell{-1.0};    // default 0.01 * (prior sd)^2
  std::vector<double> v_a{-1.0};      // default 0.1 * a0
  std::vector<double> v_delta{-1.0};  // default 0.1 * delta0
  double v_sigma = -1.0;              // default 0.05 * max(|seed|, 0.1)
  std::vector<double> v_s{-1.0};      // default (0.05 * bound width)^2
  bool adapt = false;                 // burn-in acceptance tuning, off for fidelity

  // [priors]
  bool ell_prior_gaussian = true;  // mean = seed, sd = scale * seed
  double ell_prior_sd_scale = 10.0;
  SigmaPriorKind sigma_prior = SigmaPriorKind::Jeffreys;
  double sigma_prior_sd = 10.0;  // Gaussian case; means are the seeds
  PriorSpec a_prior;             // flat by default (positivity via the TN proposal)
  PriorSpec delta_prior;         // flat by default (non-positive proposals rejected)

  // [test] hooks for prior-recovery checks
  bool flat_likelihood = false;
  bool disable_lookback = false;

  // [predict]
  std::vector<double> s_lo{1.7, 0.0};
  std::vector<double> s_hi{2.3, 1.5707963267948966};

  // [modelcheck]
  int mc_iterations = 20000;
  int mc_tail = 1000;
  double mc_step_scale = 0.5;
  bool mc_adapt = true;
  double mc_prior_pad = 5.0;

  void validate() const;

  // Expands every axis-indexed entry to exactly d values.
  void resolve_axes(int d);
};

RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig read_config_file(const std::string& path);
std::string serialize_config(const RunConfig& cfg);
void write_config_file(const RunConfig& cfg, const std::string& path);

// Applies one `section.key = value` override (CLI flags route through this).
void config_set(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

// FNV-1a over the canonical serialisation.
uint64_t config_hash(const RunConfig& cfg);

}  // namespace tgp
