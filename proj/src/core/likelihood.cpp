#include "likelihood.hpp"

#include <cmath>

namespace tgp {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

SpdMatrix Sigma1Params::matrix() const {
  SpdMatrix m(2, 2);
  m(0, 0) = s11;
  m(1, 1) = s22;
  m(0, 1) = m(1, 0) = rho * std::sqrt(s11 * s22);
  return m;
}

bool ModeCovariance::rebuild(const JitterPolicy& policy) {
  switch (strategy) {
    case CovStrategy::KernelParametrised:
      matrix = input_kernel_matrix(kernel, design_points);
      break;
    case CovStrategy::DirectMcmc:
      if (!direct.valid()) return false;
      matrix = direct.matrix();
      break;
    case CovStrategy::Empirical:
      break;  // frozen
  }
  auto f = try_cholesky(matrix, policy);
  if (!f) return false;
  factor = std::move(*f);
  return true;
}

void TensorNormalModel::validate_shapes() const {
  if (static_cast<int>(modes.size()) != mean.order())
    throw validation_error("TensorNormalModel: " + std::to_string(modes.size()) +
                           " mode covariances for order-" + std::to_string(mean.order()) +
                           " mean");
  for (int j = 0; j < mean.order(); ++j) {
    const auto& m = modes[j].matrix;
    if (m.rows() != mean.dim(j) || m.cols() != mean.dim(j))
      throw validation_error("TensorNormalModel: covariance " + m.shape_str() + " for mode " +
                             std::to_string(j) + " of size " + std::to_string(mean.dim(j)));
  }
}

bool TensorNormalModel::refresh_factors(const JitterPolicy& policy) {
  for (auto& mc : modes)
    if (!mc.rebuild(policy)) return false;
  validate_shapes();
  return true;
}

std::optional<double> TensorNormalModel::try_log_likelihood(const TensorK& data) const {
  if (data.dims() != mean.dims())
    throw validation_error("log_likelihood: data " + data.shape_str() + " vs mean " +
                           mean.shape_str());
  std::vector<CholFactor> local;  // factors computed here outlive the pointers below
  local.reserve(modes.size());
  std::vector<const CholFactor*> factors;
  for (const auto& mc : modes) {
    if (mc.factor) {
      factors.push_back(&*mc.factor);
    } else {
      auto f = try_cholesky(mc.matrix);
      if (!f) return std::nullopt;
      local.push_back(std::move(*f));
      factors.push_back(&local.back());
    }
  }
  return tensor_normal_logpdf(data, mean, factors);
}

double TensorNormalModel::log_likelihood(const TensorK& data) const {
  auto v = try_log_likelihood(data);
  if (!v) throw numeric_error("log_likelihood: a mode covariance is not positive definite");
  return *v;
}

double tensor_normal_logpdf(const TensorK& data, const TensorK& mean,
                            const std::vector<const CholFactor*>& factors) {
  if (data.dims() != mean.dims())
    throw validation_error("tensor_normal_logpdf: data " + data.shape_str() + " vs mean " +
                           mean.shape_str());
  if (static_cast<int>(factors.size()) != data.order())
    throw validation_error("tensor_normal_logpdf: " + std::to_string(factors.size()) +
                           " factors for order-" + std::to_string(data.order()) + " tensor");

  const double m = static_cast<double>(data.size());
  double logp = -0.5 * m * kLog2Pi;
  TensorK y = subtract(data, mean);
  for (int j = 0; j < data.order(); ++j) {
    logp -= m / (2.0 * data.dim(j)) * factors[j]->log_det;
    y = solve_lower_mode(*factors[j], y, j);
  }
  logp -= 0.5 * frobenius_sq(y);
  return logp;
}

TensorK empirical_mean(const TensorK& data, int sample_mode) {
  if (sample_mode < 0 || sample_mode >= data.order())
    throw validation_error("empirical_mean: bad sample mode " + std::to_string(sample_mode));
  const int n = data.dim(sample_mode);

  TensorK avg = get_slice(data, {sample_mode, 0});
  for (int i = 1; i < n; ++i) {
    const TensorK s = get_slice(data, {sample_mode, i});
    for (size_t e = 0; e < avg.size(); ++e) avg[e] += s[e];
  }
  for (size_t e = 0; e < avg.size(); ++e) avg[e] /= n;

  TensorK out(data.dims());
  for (int i = 0; i < n; ++i) set_slice(out, {sample_mode, i}, avg);
  return out;
}

SpdMatrix empirical_covariance(const TensorK& data, int target_mode, int rep_mode) {
  const int k = data.order();
  if (rep_mode < 0) rep_mode = k - 1;
  if (target_mode < 0 || target_mode >= k)
    throw validation_error("empirical_covariance: bad target mode " + std::to_string(target_mode));
  if (rep_mode == target_mode || rep_mode >= k)
    throw validation_error("empirical_covariance: replication mode " + std::to_string(rep_mode) +
                           " must differ from target mode");
  const int mt = data.dim(target_mode);
  if (mt < 2) throw validation_error("empirical_covariance: target mode size must be >= 2");

  const int n_rep = data.dim(rep_mode);
  size_t outer = 1;
  for (int j = 0; j < k; ++j)
    if (j != target_mode && j != rep_mode) outer *= static_cast<size_t>(data.dim(j));

  // Centre each target slice: subtract, per outer index, its mean over the
  // replication mode. The double sum in the estimator then collapses to a dot
  // product between centred slices.
  const int rep_in_slice = rep_mode - (rep_mode > target_mode ? 1 : 0);
  std::vector<TensorK> centred;
  centred.reserve(mt);
  for (int i = 0; i < mt; ++i) {
    TensorK s = get_slice(data, {target_mode, i});
    centred.push_back(subtract(s, empirical_mean(s, rep_in_slice)));
  }

  const double w_outer = outer > 1 ? 1.0 / (static_cast<double>(outer) - 1.0) : 1.0;
  SpdMatrix cov(mt, mt);
  for (int i = 0; i < mt; ++i) {
    for (int j = 0; j <= i; ++j) {
      double dot = 0.0;
      const auto& a = centred[i].data();
      const auto& b = centred[j].data();
      for (size_t e = 0; e < a.size(); ++e) dot += a[e] * b[e];
      const double v = w_outer * dot / n_rep;
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  return cov;
}

}  // namespace tgp
