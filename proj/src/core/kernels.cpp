#include "kernels.hpp"

#include <cmath>

namespace tgp {

SpdMatrix input_kernel_matrix(const SqeInputKernel& k, const Matrix& points) {
  const int n = points.rows();
  const int d = points.cols();
  if (d != k.input_dim())
    throw validation_error("input_kernel_matrix: points have dimension " + std::to_string(d) +
                           ", kernel has " + std::to_string(k.input_dim()));
  for (double q : k.inv_length_scales)
    if (!(q > 0.0) || !std::isfinite(q))
      throw validation_error("input_kernel_matrix: every inverse length scale must be positive "
                             "and finite");
  for (double x : points.data())
    if (!std::isfinite(x)) throw validation_error("input_kernel_matrix: non-finite point coordinate");

  SpdMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = k.global_amplitude;
    for (int j = 0; j < i; ++j) {
      double e = 0.0;
      for (int c = 0; c < d; ++c) {
        const double diff = points(i, c) - points(j, c);
        e += k.inv_length_scales[c] * diff * diff;
      }
      const double v = k.global_amplitude * std::exp(-e);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

SpdMatrix iter_kernel_matrix(const SqeIterKernel& k, int t0) {
  if (t0 < 1) throw validation_error("iter_kernel_matrix: t0 must be >= 1");
  if (!(k.amplitude > 0.0) || !(k.scale > 0.0))
    throw validation_error("iter_kernel_matrix: amplitude and scale must be positive");
  SpdMatrix m(t0, t0);
  const double denom = 2.0 * k.scale * k.scale;
  for (int i = 0; i < t0; ++i) {
    m(i, i) = k.amplitude;
    for (int j = 0; j < i; ++j) {
      const double lag = static_cast<double>(i - j);
      const double v = k.amplitude * std::exp(-lag * lag / denom);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

}  // namespace tgp
