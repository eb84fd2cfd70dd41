#include "linalg.hpp"

#include <cmath>

namespace tgp {

void check_symmetric(const SpdMatrix& m, double rel_tol) {
  if (m.rows() != m.cols())
    throw validation_error("cholesky: matrix " + m.shape_str() + " is not square");
  double scale = 0.0;
  for (double x : m.data()) scale = std::max(scale, std::abs(x));
  const double tol = rel_tol * std::max(1.0, scale);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol)
        throw validation_error("cholesky: matrix not symmetric at (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
}

namespace {

// Plain unpivoted Cholesky; false if a pivot is <= 0 or non-finite.
bool factor(const SpdMatrix& m, double jitter, Matrix& lower) {
  const int n = m.rows();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m(i, j) + (i == j ? jitter : 0.0);
      for (int k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s)) return false;
        lower(i, i) = std::sqrt(s);
      } else {
        lower(i, j) = s / lower(j, j);
      }
    }
    for (int j = i + 1; j < n; ++j) lower(i, j) = 0.0;
  }
  return true;
}

}  // namespace

std::optional<CholFactor> try_cholesky(const SpdMatrix& m, const JitterPolicy& policy) {
  check_symmetric(m);
  const int n = m.rows();
  double mean_diag = 0.0;
  for (int i = 0; i < n; ++i) mean_diag += std::abs(m(i, i));
  mean_diag = (n > 0) ? mean_diag / n : 0.0;
  if (mean_diag == 0.0) mean_diag = 1.0;

  Matrix lower(n, n);
  double jitter = 0.0;
  while (true) {
    if (factor(m, jitter, lower)) {
      CholFactor f;
      f.lower = std::move(lower);
      f.jitter_added = jitter;
      f.log_det = 0.0;
      for (int i = 0; i < n; ++i) f.log_det += 2.0 * std::log(f.lower(i, i));
      if (!std::isfinite(f.log_det)) return std::nullopt;
      return f;
    }
    if (jitter == 0.0)
      jitter = policy.rel_start * mean_diag;
    else
      jitter *= policy.escalate;
    if (jitter > policy.rel_max * mean_diag * (1.0 + 1e-12)) return std::nullopt;
  }
}

CholFactor cholesky(const SpdMatrix& m, const JitterPolicy& policy) {
  auto f = try_cholesky(m, policy);
  if (!f)
    throw numeric_error("cholesky: matrix " + m.shape_str() +
                        " not positive definite after maximum jitter");
  return *f;
}

std::vector<double> solve_lower(const Matrix& lower, const std::vector<double>& b) {
  const int n = lower.rows();
  if (static_cast<int>(b.size()) != n)
    throw validation_error("solve_lower: vector length " + std::to_string(b.size()) +
                           " vs factor " + lower.shape_str());
  std::vector<double> y(b);
  for (int i = 0; i < n; ++i) {
    double s = y[i];
    for (int k = 0; k < i; ++k) s -= lower(i, k) * y[k];
    y[i] = s / lower(i, i);
  }
  return y;
}

TensorK solve_lower_mode(const CholFactor& f, const TensorK& t, int mode) {
  if (mode < 0 || mode >= t.order())
    throw validation_error("solve_lower_mode: mode " + std::to_string(mode) +
                           " out of range for tensor " + t.shape_str());
  const int n = f.size();
  if (n != t.dim(mode))
    throw validation_error("solve_lower_mode: factor " + f.lower.shape_str() +
                           " vs mode of size " + std::to_string(t.dim(mode)));

  size_t left = 1, right = 1;
  for (int j = 0; j < mode; ++j) left *= static_cast<size_t>(t.dim(j));
  for (int j = mode + 1; j < t.order(); ++j) right *= static_cast<size_t>(t.dim(j));

  // Forward substitution over whole mode-planes. Plane a occupies, for every
  // r, the contiguous run [left*(a + n*r), left*(a + n*r) + left).
  TensorK out = t;
  double* x = out.data().data();
  const Matrix& L = f.lower;
  for (int a = 0; a < n; ++a) {
    const double inv_diag = 1.0 / L(a, a);
    for (size_t r = 0; r < right; ++r) {
      double* pa = x + left * (static_cast<size_t>(a) + static_cast<size_t>(n) * r);
      for (int b = 0; b < a; ++b) {
        const double w = L(a, b);
        if (w == 0.0) continue;
        const double* pb = x + left * (static_cast<size_t>(b) + static_cast<size_t>(n) * r);
        for (size_t l = 0; l < left; ++l) pa[l] -= w * pb[l];
      }
      for (size_t l = 0; l < left; ++l) pa[l] *= inv_diag;
    }
  }
  return out;
}

}  // namespace tgp
