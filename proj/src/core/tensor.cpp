#include "tensor.hpp"

#include <numeric>

namespace tgp {

namespace {

size_t checked_size(const std::vector<int>& dims) {
  if (dims.empty()) throw validation_error("TensorK: order must be >= 1");
  size_t n = 1;
  for (int m : dims) {
    if (m < 1) throw validation_error("TensorK: every dimension must be >= 1");
    n *= static_cast<size_t>(m);
  }
  return n;
}

std::string dims_str(const std::vector<int>& dims) {
  std::string s;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(dims[i]);
  }
  return s;
}

}  // namespace

TensorK::TensorK(std::vector<int> dims, double fill)
    : dims_(std::move(dims)), data_(checked_size(dims_), fill) {}

TensorK::TensorK(std::vector<int> dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  if (checked_size(dims_) != data_.size())
    throw validation_error("TensorK: data length " + std::to_string(data_.size()) +
                           " does not match dims " + dims_str(dims_));
}

std::string TensorK::shape_str() const { return dims_str(dims_); }

void SliceIndex::validate(const TensorK& t) const {
  if (mode < 0 || mode >= t.order())
    throw validation_error("SliceIndex: mode " + std::to_string(mode) +
                           " out of range for order-" + std::to_string(t.order()) + " tensor");
  if (index < 0 || index >= t.dim(mode))
    throw validation_error("SliceIndex: index " + std::to_string(index) +
                           " out of range for mode of size " + std::to_string(t.dim(mode)));
}

TensorK mode_product(const TensorK& t, const Matrix& m, int mode) {
  if (mode < 0 || mode >= t.order())
    throw validation_error("mode_product: mode " + std::to_string(mode) +
                           " out of range for tensor " + t.shape_str());
  if (m.cols() != t.dim(mode))
    throw validation_error("mode_product: matrix " + m.shape_str() +
                           " does not contract mode " + std::to_string(mode) + " of tensor " +
                           t.shape_str());

  size_t left = 1, right = 1;
  for (int j = 0; j < mode; ++j) left *= static_cast<size_t>(t.dim(j));
  for (int j = mode + 1; j < t.order(); ++j) right *= static_cast<size_t>(t.dim(j));
  const int mid = t.dim(mode);
  const int rows = m.rows();

  std::vector<int> out_dims = t.dims();
  out_dims[mode] = rows;
  TensorK out(out_dims, 0.0);

  const double* src = t.data().data();
  double* dst = out.data().data();
  for (size_t r = 0; r < right; ++r) {
    for (int a = 0; a < rows; ++a) {
      double* drow = dst + left * (static_cast<size_t>(a) + static_cast<size_t>(rows) * r);
      for (int b = 0; b < mid; ++b) {
        const double w = m(a, b);
        if (w == 0.0) continue;
        const double* srow = src + left * (static_cast<size_t>(b) + static_cast<size_t>(mid) * r);
        for (size_t l = 0; l < left; ++l) drow[l] += w * srow[l];
      }
    }
  }
  return out;
}

std::vector<double> vectorize(const TensorK& t) { return t.data(); }

TensorK unvectorize(const std::vector<int>& dims, std::vector<double> v) {
  return TensorK(dims, std::move(v));
}

double frobenius_sq(const TensorK& t) {
  double s = 0.0;
  for (double x : t.data()) s += x * x;
  return s;
}

TensorK get_slice(const TensorK& t, SliceIndex s) {
  s.validate(t);
  size_t left = 1, right = 1;
  for (int j = 0; j < s.mode; ++j) left *= static_cast<size_t>(t.dim(j));
  for (int j = s.mode + 1; j < t.order(); ++j) right *= static_cast<size_t>(t.dim(j));
  const size_t mid = static_cast<size_t>(t.dim(s.mode));

  std::vector<int> out_dims;
  for (int j = 0; j < t.order(); ++j)
    if (j != s.mode) out_dims.push_back(t.dim(j));
  if (out_dims.empty()) out_dims.push_back(1);  // slicing a vector leaves a scalar

  std::vector<double> out;
  out.reserve(left * right);
  const double* src = t.data().data();
  for (size_t r = 0; r < right; ++r) {
    const double* srow = src + left * (static_cast<size_t>(s.index) + mid * r);
    out.insert(out.end(), srow, srow + left);
  }
  return TensorK(out_dims, std::move(out));
}

void set_slice(TensorK& t, SliceIndex s, const TensorK& slice) {
  s.validate(t);
  size_t left = 1, right = 1;
  for (int j = 0; j < s.mode; ++j) left *= static_cast<size_t>(t.dim(j));
  for (int j = s.mode + 1; j < t.order(); ++j) right *= static_cast<size_t>(t.dim(j));
  const size_t mid = static_cast<size_t>(t.dim(s.mode));
  if (slice.size() != left * right)
    throw validation_error("set_slice: slice " + slice.shape_str() + " does not fit tensor " +
                           t.shape_str() + " at mode " + std::to_string(s.mode));

  double* dst = t.data().data();
  const double* src = slice.data().data();
  for (size_t r = 0; r < right; ++r) {
    double* drow = dst + left * (static_cast<size_t>(s.index) + mid * r);
    for (size_t l = 0; l < left; ++l) drow[l] = src[r * left + l];
  }
}

TensorK subtract(const TensorK& a, const TensorK& b) {
  if (a.dims() != b.dims())
    throw validation_error("subtract: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
  TensorK out = a;
  for (size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

}  // namespace tgp
