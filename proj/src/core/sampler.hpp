#pragma once

#include "likelihood.hpp"
#include "nested_gp.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "run_config.hpp"

namespace tgp {

enum class RunMode {
  Train,         // training data only
  PredictJoint,  // augmented data, s_test sampled jointly with the GP unknowns
  PredictModal   // augmented data, GP unknowns frozen at a posterior summary
};

// Point values of the GP unknowns at a chosen posterior summary (mode or
// mean), used to freeze the model for modal prediction and model checking.
struct ModalSnapshot {
  std::vector<double> q;  // smoothness per axis, q_c = 1/ell_c
  Sigma1Params sigma;
  bool has_sigma = false;
};

// All unknowns current at one iteration, plus the nested layer's lookback
// buffers and the generator state.
struct ChainState {
  int t = 0;  // completed sweeps
  std::vector<double> ell;
  std::vector<ScalarGpHyper> hyper;
  Sigma1Params sigma;
  std::vector<double> s_test;
  std::vector<LookbackBuffer> lookbacks;
  CounterRng rng;
  double loglik = 0.0;

  ChainState() : rng(0) {}
};

// Metropolis-within-Gibbs over the tensor-normal posterior. Block order per
// sweep is fixed: (a_c, delta_c) when the nested layer is active, then the
// length scales, then the directly-learnt covariance elements, then s_test
// for prediction runs. Lookback buffers advance with the post-update values.
class Sampler {
public:
  // `design` holds the training design points (one row per slice of the
  // kernel-parametrised mode). For prediction runs the data tensor carries
  // one extra slice on that mode whose design point is the sampled s_test.
  Sampler(TensorK data, Matrix design, RunConfig cfg, RunMode mode = RunMode::Train,
          const ModalSnapshot* snapshot = nullptr, uint64_t chain_index = 0);

  void step();
  RunReport run();  // cfg.iterations sweeps from the current state

  const ChainState& state() const { return state_; }
  int input_dim() const { return d_; }
  int kernel_mode() const { return kernel_mode_; }
  bool direct_block_active() const { return direct_mode_ >= 0 && !frozen_; }

  // Outcome of the most recent sweep, one flag per executed block.
  bool last_accept_hyper() const { return last_accept_hyper_; }
  bool last_accept_ell() const { return last_accept_ell_; }
  bool last_accept_sigma() const { return last_accept_sigma_; }
  bool last_accept_s() const { return last_accept_s_; }

private:
  bool nested_active() const;
  void hyper_block();
  void ell_block();
  void sigma_block();
  void s_block();
  double proposed_loglik(const ModeCovariance& replacement, int mode);
  double ell_log_prior(const std::vector<double>& ell) const;
  double sigma_log_prior(const Sigma1Params& p) const;
  void check_finite(double loglik) const;
  void adapt_variances();

  TensorK data_;
  Matrix design_;
  RunConfig cfg_;
  RunMode mode_;
  bool frozen_;
  bool with_test_;
  uint64_t chain_index_;

  uint64_t config_hash_ = 0;
  int d_ = 0;
  int kernel_mode_ = -1;
  int direct_mode_ = -1;

  std::vector<double> ell_prior_mean_, ell_prior_sd_;
  std::vector<double> v_ell_, v_a_, v_delta_, v_s_;
  double v_sigma11_ = 0.0, v_sigma22_ = 0.0, v_rho_ = 0.0;

  TensorNormalModel model_;
  ChainState state_;

  bool last_accept_hyper_ = false, last_accept_ell_ = false;
  bool last_accept_sigma_ = false, last_accept_s_ = false;
  std::map<std::string, long> attempts_, accepts_;
  std::map<std::string, long> window_attempts_, window_accepts_;
};

// Convenience wrapper: construct, run, report.
RunReport run_chain(const TensorK& data, const Matrix& design, const RunConfig& cfg,
                    RunMode mode = RunMode::Train, const ModalSnapshot* snapshot = nullptr,
                    uint64_t chain_index = 0);

}  // namespace tgp
