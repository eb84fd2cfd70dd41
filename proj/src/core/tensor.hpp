#pragma once

#include <vector>

#include "matrix.hpp"

namespace tgp {

// Dense k-order tensor.
//
// Flat layout: mode 0 runs fastest, i.e. for indices (i_0,...,i_{k-1}) with
// dims (m_0,...,m_{k-1}),
//
//   flat = i_0 + m_0*(i_1 + m_1*(i_2 + ... )).
//
// This is the column-major generalisation, so vectorize() satisfies
// vec(T x_0 M_0 ... x_{k-1} M_{k-1}) = (M_{k-1} (x) ... (x) M_0) vec(T),
// which fixes the Kronecker factor order used by the likelihood oracle
// as Sigma_{k-1} (x) ... (x) Sigma_0.
class TensorK {
public:
  TensorK() = default;
  TensorK(std::vector<int> dims, double fill = 0.0);
  TensorK(std::vector<int> dims, std::vector<double> data);

  int order() const { return static_cast<int>(dims_.size()); }
  int dim(int mode) const { return dims_[mode]; }
  const std::vector<int>& dims() const { return dims_; }
  size_t size() const { return data_.size(); }

  double& operator[](size_t flat) { return data_[flat]; }
  double operator[](size_t flat) const { return data_[flat]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  std::string shape_str() const;

private:
  std::vector<int> dims_;
  std::vector<double> data_;
};

// Address of one slice: all entries with index `index` along `mode`.
// Both fields 0-based here; user-facing surfaces convert from 1-based.
struct SliceIndex {
  int mode = 0;
  int index = 0;
  void validate(const TensorK& t) const;
};

// Contraction of m against the `mode`-th index of t. Result dims equal
// t.dims with dims[mode] replaced by m.rows(); requires m.cols() == dims[mode].
TensorK mode_product(const TensorK& t, const Matrix& m, int mode);

std::vector<double> vectorize(const TensorK& t);
TensorK unvectorize(const std::vector<int>& dims, std::vector<double> v);

double frobenius_sq(const TensorK& t);

// The (k-1)-order sub-tensor at one index of one mode.
TensorK get_slice(const TensorK& t, SliceIndex s);
void set_slice(TensorK& t, SliceIndex s, const TensorK& slice);

TensorK subtract(const TensorK& a, const TensorK& b);

}  // namespace tgp
