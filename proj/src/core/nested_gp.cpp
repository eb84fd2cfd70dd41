#include "nested_gp.hpp"

#include <cmath>

namespace tgp {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

LookbackBuffer::LookbackBuffer(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw validation_error("LookbackBuffer: capacity must be >= 1");
  ring_.resize(capacity);
}

void LookbackBuffer::push(double accepted_value) {
  ring_[head_] = accepted_value;
  head_ = (head_ + 1) % ring_.size();
  if (count_ < ring_.size()) ++count_;
}

std::vector<double> LookbackBuffer::values() const {
  std::vector<double> out;
  out.reserve(count_);
  const size_t start = (head_ + ring_.size() - count_) % ring_.size();
  for (size_t i = 0; i < count_; ++i) out.push_back(ring_[(start + i) % ring_.size()]);
  return out;
}

double LookbackBuffer::mean() const {
  if (count_ == 0) return 0.0;
  double s = 0.0;
  for (size_t i = 0; i < count_; ++i) s += ring_[i];
  return s / static_cast<double>(count_);
}

std::optional<double> lookback_log_prior(const LookbackBuffer& buf, const ScalarGpHyper& hyper,
                                         const JitterPolicy& policy) {
  if (!buf.full())
    throw validation_error("lookback_log_prior: buffer holds " + std::to_string(buf.size()) +
                           " of " + std::to_string(buf.capacity()) + " values");
  const int t0 = buf.capacity();
  std::vector<double> g = buf.values();
  const double m_hat = buf.mean();
  for (double& x : g) x -= m_hat;

  const SpdMatrix psi = iter_kernel_matrix({hyper.amplitude, hyper.scale}, t0);
  auto f = try_cholesky(psi, policy);
  if (!f) return std::nullopt;

  const std::vector<double> y = solve_lower(f->lower, g);
  double quad = 0.0;
  for (double v : y) quad += v * v;
  return -0.5 * (t0 * kLog2Pi + f->log_det + quad);
}

}  // namespace tgp
