#pragma once

#include "linalg.hpp"

namespace tgp {

// Squared-exponential kernel over input space:
//
//   K(s_i, s_j) = amplitude * exp( - sum_c q_c (s_ic - s_jc)^2 ),
//
// with q_c = 1/ell_c the smoothness along axis c. The amplitude is fixed to 1
// here; any overall scale is carried by one of the directly-learnt covariance
// matrices instead.
struct SqeInputKernel {
  std::vector<double> inv_length_scales;  // q_c > 0
  double global_amplitude = 1.0;

  int input_dim() const { return static_cast<int>(inv_length_scales.size()); }
};

// Squared-exponential kernel over the iteration index:
//
//   Psi(i, j) = amplitude * exp( -(i - j)^2 / (2 scale^2) ).
//
// The 2*scale^2 denominator is fixed project-wide (see docs/FORMATS.md);
// learnt scale values are specific to this convention.
struct SqeIterKernel {
  double amplitude = 1.0;  // a_c > 0
  double scale = 1.0;      // delta_c > 0
};

// n x n kernel matrix over rows of `points` (n x d). Unit diagonal when the
// amplitude is 1; entries lie in (0, 1].
SpdMatrix input_kernel_matrix(const SqeInputKernel& k, const Matrix& points);

// t0 x t0 matrix over iteration lags; diagonal entries all equal the amplitude.
SpdMatrix iter_kernel_matrix(const SqeIterKernel& k, int t0);

}  // namespace tgp
