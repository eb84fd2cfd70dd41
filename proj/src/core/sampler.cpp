#include "sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace tgp {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double gaussian_lp(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * (kLog2Pi + 2.0 * std::log(sd)) - 0.5 * z * z;
}

double prior_lp(const PriorSpec& p, double x) {
  return p.gaussian ? gaussian_lp(x, p.mean, p.sd) : 0.0;
}

// Median over all pairwise squared separations along one design axis; the
// data-driven seeding scale for ell ("auto" initialisation).
double median_sq_spacing(const Matrix& design, int axis) {
  std::vector<double> d2;
  for (int i = 0; i < design.rows(); ++i)
    for (int j = 0; j < i; ++j) {
      const double diff = design(i, axis) - design(j, axis);
      d2.push_back(diff * diff);
    }
  if (d2.empty()) return 1.0;
  std::sort(d2.begin(), d2.end());
  const double med = d2[d2.size() / 2];
  return med > 0.0 ? med : 1.0;
}

}  // namespace

Sampler::Sampler(TensorK data, Matrix design, RunConfig cfg, RunMode mode,
                 const ModalSnapshot* snapshot, uint64_t chain_index)
    : data_(std::move(data)),
      design_(std::move(design)),
      cfg_(std::move(cfg)),
      mode_(mode),
      frozen_(mode == RunMode::PredictModal),
      with_test_(mode != RunMode::Train),
      chain_index_(chain_index) {
  cfg_.validate();
  config_hash_ = config_hash(cfg_);  // hash of the configuration as supplied
  d_ = design_.cols();
  if (d_ < 1) throw validation_error("sampler: design points must have at least one column");
  cfg_.resolve_axes(d_);

  const int k = data_.order();
  kernel_mode_ = cfg_.kernel_mode == 0 ? k - 1 : cfg_.kernel_mode - 1;
  if (kernel_mode_ < 0 || kernel_mode_ >= k)
    throw validation_error("sampler: kernel_mode out of range for order-" + std::to_string(k) +
                           " data");
  const int expected_rows = data_.dim(kernel_mode_) - (with_test_ ? 1 : 0);
  if (design_.rows() != expected_rows)
    throw validation_error("sampler: " + std::to_string(design_.rows()) +
                           " design points for kernel mode of size " +
                           std::to_string(data_.dim(kernel_mode_)));

  if (cfg_.direct_mode == RunConfig::kNoDirectMode) {
    direct_mode_ = -1;
  } else if (cfg_.direct_mode == 0) {
    direct_mode_ = (kernel_mode_ != 0 && data_.dim(0) == 2) ? 0 : -1;
  } else {
    direct_mode_ = cfg_.direct_mode - 1;
    if (direct_mode_ == kernel_mode_ || direct_mode_ < 0 || direct_mode_ >= k)
      throw validation_error("sampler: direct_mode " + std::to_string(cfg_.direct_mode) +
                             " invalid");
    if (data_.dim(direct_mode_) != 2)
      throw validation_error("sampler: the directly-learnt covariance is parametrised as "
                             "(sigma11, sigma22, rho) and needs a mode of size 2, got size " +
                             std::to_string(data_.dim(direct_mode_)));
  }

  // Seeds and per-axis scales.
  std::vector<double> ell0 = cfg_.ell0;
  if (cfg_.ell0_auto)
    for (int c = 0; c < d_; ++c) ell0[c] = median_sq_spacing(design_, c);
  if (frozen_) {
    if (!snapshot || static_cast<int>(snapshot->q.size()) != d_)
      throw validation_error("sampler: modal prediction needs a snapshot with d smoothness values");
    for (int c = 0; c < d_; ++c) {
      if (!(snapshot->q[c] > 0.0))
        throw validation_error("sampler: snapshot smoothness values must be positive");
      ell0[c] = 1.0 / snapshot->q[c];
    }
  }

  ell_prior_mean_ = ell0;
  ell_prior_sd_.resize(d_);
  for (int c = 0; c < d_; ++c) ell_prior_sd_[c] = cfg_.ell_prior_sd_scale * ell0[c];

  v_ell_ = cfg_.v_ell;
  v_a_ = cfg_.v_a;
  v_delta_ = cfg_.v_delta;
  v_s_ = cfg_.v_s;
  for (int c = 0; c < d_; ++c) {
    if (v_ell_[c] < 0.0) v_ell_[c] = 0.01 * ell_prior_sd_[c] * ell_prior_sd_[c];
    if (v_a_[c] < 0.0) v_a_[c] = 0.1 * cfg_.a0[c];
    if (v_delta_[c] < 0.0) v_delta_[c] = 0.1 * cfg_.delta0[c];
    if (v_s_[c] < 0.0) {
      const double w = cfg_.s_hi[c] - cfg_.s_lo[c];
      v_s_[c] = 0.0025 * w * w;  // proposal sd = 5% of the prior box width
    }
  }
  const double vs = cfg_.v_sigma;
  v_sigma11_ = vs >= 0.0 ? vs : 0.05 * std::max(std::abs(cfg_.sigma11_0), 0.1);
  v_sigma22_ = vs >= 0.0 ? vs : 0.05 * std::max(std::abs(cfg_.sigma22_0), 0.1);
  v_rho_ = vs >= 0.0 ? vs : 0.05 * std::max(std::abs(cfg_.rho_0), 0.1);

  // Chain state.
  state_.rng = CounterRng(cfg_.seed, chain_index_);
  state_.ell = ell0;
  state_.sigma = {cfg_.sigma11_0, cfg_.sigma22_0, cfg_.rho_0};
  if (frozen_ && snapshot->has_sigma) state_.sigma = snapshot->sigma;
  if (cfg_.flavour == ModelFlavour::Nested && !frozen_) {
    state_.hyper.resize(d_);
    for (int c = 0; c < d_; ++c) state_.hyper[c] = {cfg_.a0[c], cfg_.delta0[c]};
    for (int c = 0; c < d_; ++c) {
      state_.lookbacks.emplace_back(cfg_.t0);
      state_.lookbacks[c].push(state_.ell[c]);
    }
  }
  if (with_test_) {
    state_.s_test.resize(d_);
    for (int c = 0; c < d_; ++c) state_.s_test[c] = 0.5 * (cfg_.s_lo[c] + cfg_.s_hi[c]);
  }

  // Model: empirical mean over the design-point mode, then one covariance
  // strategy per mode.
  model_.mean = empirical_mean(data_, kernel_mode_);
  model_.modes.resize(k);
  for (int j = 0; j < k; ++j) {
    ModeCovariance& mc = model_.modes[j];
    if (j == kernel_mode_) {
      mc.strategy = CovStrategy::KernelParametrised;
      mc.kernel.inv_length_scales.resize(d_);
      for (int c = 0; c < d_; ++c) mc.kernel.inv_length_scales[c] = 1.0 / state_.ell[c];
      const int rows = data_.dim(kernel_mode_);
      mc.design_points = Matrix(rows, d_);
      for (int i = 0; i < design_.rows(); ++i)
        for (int c = 0; c < d_; ++c) mc.design_points(i, c) = design_(i, c);
      if (with_test_)
        for (int c = 0; c < d_; ++c) mc.design_points(rows - 1, c) = state_.s_test[c];
    } else if (j == direct_mode_) {
      mc.strategy = CovStrategy::DirectMcmc;
      mc.direct = state_.sigma;
    } else {
      mc.strategy = CovStrategy::Empirical;
      if (data_.dim(j) == 1) {
        mc.matrix = Matrix(1, 1);
        mc.matrix(0, 0) = 1.0;
      } else {
        mc.matrix = empirical_covariance(data_, j, kernel_mode_);
      }
    }
  }
  if (!model_.refresh_factors())
    throw numeric_error("sampler: a covariance matrix is not positive definite at the seed state");

  if (cfg_.flat_likelihood) {
    state_.loglik = 0.0;
  } else {
    std::vector<const CholFactor*> f(k);
    for (int j = 0; j < k; ++j) f[j] = &*model_.modes[j].factor;
    state_.loglik = tensor_normal_logpdf(data_, model_.mean, f);
    check_finite(state_.loglik);
  }
}

bool Sampler::nested_active() const {
  return cfg_.flavour == ModelFlavour::Nested && !frozen_ && state_.t + 1 >= cfg_.t0;
}

double Sampler::proposed_loglik(const ModeCovariance& replacement, int mode) {
  std::vector<const CholFactor*> f(model_.modes.size());
  for (size_t j = 0; j < model_.modes.size(); ++j)
    f[j] = static_cast<int>(j) == mode ? &*replacement.factor : &*model_.modes[j].factor;
  return tensor_normal_logpdf(data_, model_.mean, f);
}

double Sampler::ell_log_prior(const std::vector<double>& ell) const {
  if (!cfg_.ell_prior_gaussian) return 0.0;
  double lp = 0.0;
  for (int c = 0; c < d_; ++c) lp += gaussian_lp(ell[c], ell_prior_mean_[c], ell_prior_sd_[c]);
  return lp;
}

double Sampler::sigma_log_prior(const Sigma1Params& p) const {
  if (cfg_.sigma_prior == SigmaPriorKind::Gaussian) {
    return gaussian_lp(p.s11, cfg_.sigma11_0, cfg_.sigma_prior_sd) +
           gaussian_lp(p.s22, cfg_.sigma22_0, cfg_.sigma_prior_sd) +
           gaussian_lp(p.rho, cfg_.rho_0, cfg_.sigma_prior_sd);
  }
  // Jeffreys |Sigma|^{-(p+1)/2} with p = 2 on (s11, s22, s12), carried to the
  // (s11, s22, rho) parametrisation by the Jacobian ds12/drho = sqrt(s11 s22):
  //   log pi = -3/2 log|Sigma| + 1/2 (log s11 + log s22)
  //          = -log s11 - log s22 - 3/2 log(1 - rho^2).
  return -std::log(p.s11) - std::log(p.s22) - 1.5 * std::log(1.0 - p.rho * p.rho);
}

void Sampler::check_finite(double loglik) const {
  if (!std::isnan(loglik)) return;
  std::ostringstream ss;
  ss << "sampler: NaN log-likelihood at sweep " << state_.t + 1 << "; state: ell=(";
  for (int c = 0; c < d_; ++c) ss << (c ? "," : "") << state_.ell[c];
  ss << ") sigma=(" << state_.sigma.s11 << "," << state_.sigma.s22 << "," << state_.sigma.rho
     << ")";
  throw numeric_error(ss.str());
}

void Sampler::hyper_block() {
  ++attempts_["hyper"];
  ++window_attempts_["hyper"];
  std::vector<ScalarGpHyper> prop(d_);
  for (int c = 0; c < d_; ++c) {
    prop[c].amplitude =
        state_.rng.next_truncated_normal_pos(state_.hyper[c].amplitude, std::sqrt(v_a_[c]));
    prop[c].scale = state_.rng.next_normal(state_.hyper[c].scale, std::sqrt(v_delta_[c]));
  }
  for (int c = 0; c < d_; ++c)
    if (!(prop[c].scale > 0.0)) return;  // scale must stay positive

  double logr = 0.0;
  if (!cfg_.disable_lookback) {
    for (int c = 0; c < d_; ++c) {
      auto lp_new = lookback_log_prior(state_.lookbacks[c], prop[c]);
      if (!lp_new) return;  // proposed Psi not PD
      auto lp_old = lookback_log_prior(state_.lookbacks[c], state_.hyper[c]);
      logr += *lp_new - (lp_old ? *lp_old : *lp_new - 1e10);
    }
  }
  // Left-truncated proposal is asymmetric; the Hastings correction is
  // q(old|new)/q(new|old) = Phi(a_old/sd) / Phi(a_new/sd).
  for (int c = 0; c < d_; ++c) {
    const double sd = std::sqrt(v_a_[c]);
    if (sd > 0.0)
      logr += std::log(norm_cdf(state_.hyper[c].amplitude / sd)) -
              std::log(norm_cdf(prop[c].amplitude / sd));
    logr += prior_lp(cfg_.a_prior, prop[c].amplitude) -
            prior_lp(cfg_.a_prior, state_.hyper[c].amplitude);
    logr += prior_lp(cfg_.delta_prior, prop[c].scale) -
            prior_lp(cfg_.delta_prior, state_.hyper[c].scale);
  }
  if (std::log(state_.rng.next_unit()) < logr) {
    state_.hyper = prop;
    ++accepts_["hyper"];
    ++window_accepts_["hyper"];
    last_accept_hyper_ = true;
  }
}

void Sampler::ell_block() {
  ++attempts_["ell"];
  ++window_attempts_["ell"];
  const bool adaptive = nested_active();
  std::vector<double> prop(d_);
  for (int c = 0; c < d_; ++c) {
    const double var = adaptive ? adaptive_proposal_variance(state_.hyper[c]) : v_ell_[c];
    prop[c] = state_.rng.next_normal(state_.ell[c], std::sqrt(var));
  }
  for (int c = 0; c < d_; ++c)
    if (!(prop[c] > 0.0)) return;  // length scales stay positive

  ModeCovariance cand = model_.modes[kernel_mode_];
  for (int c = 0; c < d_; ++c) cand.kernel.inv_length_scales[c] = 1.0 / prop[c];
  if (!cand.rebuild()) return;  // PD failure counts as a rejection

  const double ll = cfg_.flat_likelihood ? 0.0 : proposed_loglik(cand, kernel_mode_);
  check_finite(ll);
  const double logr = ll - state_.loglik + ell_log_prior(prop) - ell_log_prior(state_.ell);
  if (std::log(state_.rng.next_unit()) < logr) {
    model_.modes[kernel_mode_] = std::move(cand);
    state_.ell = prop;
    state_.loglik = ll;
    ++accepts_["ell"];
    ++window_accepts_["ell"];
    last_accept_ell_ = true;
  }
}

void Sampler::sigma_block() {
  ++attempts_["sigma"];
  ++window_attempts_["sigma"];
  Sigma1Params prop;
  prop.s11 = state_.rng.next_normal(state_.sigma.s11, std::sqrt(v_sigma11_));
  prop.s22 = state_.rng.next_normal(state_.sigma.s22, std::sqrt(v_sigma22_));
  prop.rho = state_.rng.next_normal(state_.sigma.rho, std::sqrt(v_rho_));
  if (!prop.valid()) return;  // prior zero outside sigma > 0, |rho| < 1

  ModeCovariance cand = model_.modes[direct_mode_];
  cand.direct = prop;
  if (!cand.rebuild()) return;

  const double ll = cfg_.flat_likelihood ? 0.0 : proposed_loglik(cand, direct_mode_);
  check_finite(ll);
  const double logr =
      ll - state_.loglik + sigma_log_prior(prop) - sigma_log_prior(state_.sigma);
  if (std::log(state_.rng.next_unit()) < logr) {
    model_.modes[direct_mode_] = std::move(cand);
    state_.sigma = prop;
    state_.loglik = ll;
    ++accepts_["sigma"];
    ++window_accepts_["sigma"];
    last_accept_sigma_ = true;
  }
}

void Sampler::s_block() {
  ++attempts_["s_test"];
  ++window_attempts_["s_test"];
  std::vector<double> prop(d_);
  for (int c = 0; c < d_; ++c)
    prop[c] = state_.rng.next_normal(state_.s_test[c], std::sqrt(v_s_[c]));
  for (int c = 0; c < d_; ++c)
    if (prop[c] < cfg_.s_lo[c] || prop[c] > cfg_.s_hi[c]) return;  // uniform prior zero

  ModeCovariance cand = model_.modes[kernel_mode_];
  const int test_row = cand.design_points.rows() - 1;
  for (int c = 0; c < d_; ++c) cand.design_points(test_row, c) = prop[c];
  if (!cand.rebuild()) return;

  const double ll = cfg_.flat_likelihood ? 0.0 : proposed_loglik(cand, kernel_mode_);
  check_finite(ll);
  const double logr = ll - state_.loglik;
  if (std::log(state_.rng.next_unit()) < logr) {
    model_.modes[kernel_mode_] = std::move(cand);
    state_.s_test = prop;
    state_.loglik = ll;
    ++accepts_["s_test"];
    ++window_accepts_["s_test"];
    last_accept_s_ = true;
  }
}

void Sampler::adapt_variances() {
  auto tune = [this](const std::string& block, auto&& scale_fn) {
    const long wa = window_attempts_[block];
    if (wa < 20) return;
    const double rate = static_cast<double>(window_accepts_[block]) / wa;
    if (rate < 0.2)
      scale_fn(0.5);
    else if (rate > 0.4)
      scale_fn(2.0);
    window_attempts_[block] = 0;
    window_accepts_[block] = 0;
  };
  tune("ell", [this](double f) {
    for (double& v : v_ell_) v *= f;
  });
  tune("sigma", [this](double f) {
    v_sigma11_ *= f;
    v_sigma22_ *= f;
    v_rho_ *= f;
  });
  tune("s_test", [this](double f) {
    for (double& v : v_s_) v *= f;
  });
}

void Sampler::step() {
  last_accept_hyper_ = last_accept_ell_ = last_accept_sigma_ = last_accept_s_ = false;
  if (!frozen_) {
    if (nested_active()) hyper_block();
    ell_block();
    if (direct_mode_ >= 0) sigma_block();
  }
  if (with_test_) s_block();
  if (cfg_.flavour == ModelFlavour::Nested && !frozen_)
    for (int c = 0; c < d_; ++c) state_.lookbacks[c].push(state_.ell[c]);
  ++state_.t;
  if (cfg_.adapt && state_.t <= static_cast<int>(cfg_.burnin_frac * cfg_.iterations) &&
      state_.t % 100 == 0)
    adapt_variances();
}

RunReport Sampler::run() {
  const auto start = std::chrono::steady_clock::now();
  RunReport rep;
  rep.seed = cfg_.seed;
  rep.config_hash = config_hash_;
  rep.input_dim = d_;

  std::vector<std::string> cols;
  cols.push_back("loglik");
  if (!frozen_) {
    for (int c = 1; c <= d_; ++c) cols.push_back("q_" + std::to_string(c));
    for (int c = 1; c <= d_; ++c) cols.push_back("ell_" + std::to_string(c));
    if (cfg_.flavour == ModelFlavour::Nested) {
      for (int c = 1; c <= d_; ++c) cols.push_back("a_" + std::to_string(c));
      for (int c = 1; c <= d_; ++c) cols.push_back("delta_" + std::to_string(c));
    }
    if (direct_mode_ >= 0) {
      cols.push_back("sigma11");
      cols.push_back("sigma22");
      cols.push_back("rho");
    }
  }
  if (with_test_)
    for (int c = 1; c <= d_; ++c) cols.push_back("s" + std::to_string(c) + "_test");
  if (!frozen_) cols.push_back("accept_block1");
  if (direct_mode_ >= 0 && !frozen_) cols.push_back("accept_block2");
  rep.columns = cols;
  rep.trace.assign(cols.size(), {});
  for (auto& v : rep.trace) v.reserve(cfg_.iterations);

  for (int it = 0; it < cfg_.iterations; ++it) {
    step();
    size_t c = 0;
    rep.trace[c++].push_back(state_.loglik);
    if (!frozen_) {
      for (int a = 0; a < d_; ++a) rep.trace[c++].push_back(1.0 / state_.ell[a]);
      for (int a = 0; a < d_; ++a) rep.trace[c++].push_back(state_.ell[a]);
      if (cfg_.flavour == ModelFlavour::Nested) {
        for (int a = 0; a < d_; ++a) rep.trace[c++].push_back(state_.hyper[a].amplitude);
        for (int a = 0; a < d_; ++a) rep.trace[c++].push_back(state_.hyper[a].scale);
      }
      if (direct_mode_ >= 0) {
        rep.trace[c++].push_back(state_.sigma.s11);
        rep.trace[c++].push_back(state_.sigma.s22);
        rep.trace[c++].push_back(state_.sigma.rho);
      }
    }
    if (with_test_)
      for (int a = 0; a < d_; ++a) rep.trace[c++].push_back(state_.s_test[a]);
    if (!frozen_) rep.trace[c++].push_back(last_accept_ell_ ? 1.0 : 0.0);
    if (direct_mode_ >= 0 && !frozen_) rep.trace[c++].push_back(last_accept_sigma_ ? 1.0 : 0.0);
  }

  for (const auto& [block, att] : attempts_)
    rep.acceptance[block] = att > 0 ? static_cast<double>(accepts_[block]) / att : 0.0;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

RunReport run_chain(const TensorK& data, const Matrix& design, const RunConfig& cfg, RunMode mode,
                    const ModalSnapshot* snapshot, uint64_t chain_index) {
  Sampler s(data, design, cfg, mode, snapshot, chain_index);
  return s.run();
}

}  // namespace tgp
