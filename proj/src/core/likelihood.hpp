#pragma once

#include "kernels.hpp"

namespace tgp {

// How one mode's covariance matrix is obtained.
enum class CovStrategy {
  KernelParametrised,  // SQE kernel over design points; length scales sampled
  Empirical,           // frozen estimate computed from the data before sampling
  DirectMcmc           // 2x2 matrix parametrised by (s11, s22, rho), sampled
};

// Free elements of a directly-learnt 2x2 covariance matrix:
// diagonal s11, s22 and correlation rho = s12/sqrt(s11*s22).
struct Sigma1Params {
  double s11 = 1.0;
  double s22 = 1.0;
  double rho = 0.0;

  bool valid() const { return s11 > 0.0 && s22 > 0.0 && rho > -1.0 && rho < 1.0; }
  SpdMatrix matrix() const;
};

struct ModeCovariance {
  CovStrategy strategy = CovStrategy::Empirical;
  SpdMatrix matrix;
  std::optional<CholFactor> factor;

  // KernelParametrised state.
  SqeInputKernel kernel;
  Matrix design_points;  // n x d

  // DirectMcmc state.
  Sigma1Params direct;

  // Recomputes `matrix` from the strategy parameters (no-op for Empirical)
  // and refreshes the factor. False means not PD: a rejected proposal.
  bool rebuild(const JitterPolicy& policy = {});
};

// Tensor-normal model: data ~ TN(mean, Sigma_0, ..., Sigma_{k-1}), one
// covariance matrix per mode, vectorised covariance Sigma_{k-1} (x) ... (x)
// Sigma_0 under the layout documented in tensor.hpp.
struct TensorNormalModel {
  TensorK mean;
  std::vector<ModeCovariance> modes;

  void validate_shapes() const;
  bool refresh_factors(const JitterPolicy& policy = {});

  // Log density including the full normalising constant. Empty optional if a
  // covariance fails to factor.
  std::optional<double> try_log_likelihood(const TensorK& data) const;
  double log_likelihood(const TensorK& data) const;
};

// Log density given ready factors:
//   -(m/2) log 2pi - sum_j (m / (2 m_j)) log|Sigma_j| - ||centered whitened||^2 / 2.
double tensor_normal_logpdf(const TensorK& data, const TensorK& mean,
                            const std::vector<const CholFactor*>& factors);

// Sample mean over the replication mode, repeated along that mode so the
// result has the data's shape.
TensorK empirical_mean(const TensorK& data, int sample_mode);

// Empirical estimate of the covariance among slices of `target_mode`.
//
// With rep_mode the replication/design mode (default: the last mode) and the
// remaining "outer" modes of total size R, the (i,j) entry is
//
//   (1/max(1, R-1)) * sum_outer [ (1/n_rep) *
//       sum_p (x^i[p,outer] - xbar^i[outer]) * (x^j[p,outer] - xbar^j[outer]) ]
//
// where xbar^i[outer] is the mean over p of x^i[p,outer]. Dividing the inner
// sum by n_rep (not n_rep - 1) is deliberate; see the data-format docs for the
// normalisation.
SpdMatrix empirical_covariance(const TensorK& data, int target_mode, int rep_mode = -1);

}  // namespace tgp
