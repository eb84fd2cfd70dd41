#pragma once

#include <map>

#include "tensor.hpp"

namespace tgp {

// On-disk dataset: a k-order tensor plus the design-point table for the last
// mode (one row per slice; a test slice whose design point is unknown carries
// NaNs). `meta` holds provenance key=value pairs, e.g. the generator settings
// a synthetic file was produced with.
//
// Two formats, chosen by extension: ".bin" is raw little-endian float64 and
// round-trips bit-exactly; anything else is the CSV form described in the
// README. The tensor body is stored flat with mode 1 fastest.
struct Dataset {
  TensorK tensor;
  Matrix design;  // n x d, n = last-mode size
  std::map<std::string, std::string> meta;

  int design_dim() const { return design.cols(); }
  void validate() const;
};

Dataset read_dataset(const std::string& path);
void write_dataset(const Dataset& ds, const std::string& path);

// Splits off the final slice of the last mode: `train` keeps n-1 slices and
// design rows, `test` holds the one remaining slice with a NaN design point.
void split_last_slice(const Dataset& ds, Dataset& train, Dataset& test);

}  // namespace tgp
