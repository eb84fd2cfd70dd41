#pragma once

#include "kernels.hpp"

namespace tgp {

// Amplitude and scale of the iteration-domain SQE kernel driving one length
// scale's scalar GP. One pair per input-space axis.
struct ScalarGpHyper {
  double amplitude = 1.0;  // a_c; also the adaptive proposal variance for ell_c
  double scale = 1.0;      // delta_c
};

// The last t0 accepted values of one length scale, oldest to newest. Only
// post-update ("current") chain values enter; proposals never do.
class LookbackBuffer {
public:
  explicit LookbackBuffer(int capacity);

  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(count_); }
  bool full() const { return size() == capacity_; }

  void push(double accepted_value);
  std::vector<double> values() const;  // oldest -> newest
  double mean() const;

private:
  int capacity_;
  std::vector<double> ring_;
  size_t head_ = 0;  // next write position
  size_t count_ = 0;
};

// Log density of the mean-subtracted lookback data under the zero-mean
// t0-variate normal with covariance Psi = iter_kernel_matrix(hyper, t0).
// Empty optional when Psi fails to factor: the caller rejects the proposal.
std::optional<double> lookback_log_prior(const LookbackBuffer& buf, const ScalarGpHyper& hyper,
                                         const JitterPolicy& policy = {});

// Proposal variance for ell_c once the nested layer is active: the current
// amplitude. After a rejected (a, delta) block the retained amplitude is used.
inline double adaptive_proposal_variance(const ScalarGpHyper& hyper) { return hyper.amplitude; }

}  // namespace tgp
