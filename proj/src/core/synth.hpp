#pragma once

#include "dataset.hpp"
#include "likelihood.hpp"
#include "rng.hpp"

namespace tgp {

// Synthetic tensor-normal data on a regular design grid. The last dim is the
// number of design points, factored into a near-square d-dimensional grid.
// Axis spacing defaults to sqrt(ln 2 / q_c), putting neighbouring slices at
// correlation one half so the smoothness values are recoverable.
struct SynthOptions {
  std::vector<int> dims{2, 10, 64};
  int d = 2;
  std::vector<double> q{3800.0, 72.0};  // true smoothness per axis
  uint64_t seed = 1;

  std::vector<double> center;   // default 2.0, pi/4, then 0.5
  std::vector<double> spacing;  // <= 0 entries replaced by sqrt(ln2/q_c)

  // Two-regime discontinuity: design points are split at the median of the
  // first axis; the upper regime uses q_1 * regime_q_factor and the two
  // regimes decorrelate completely.
  bool two_regime = false;
  double regime_q_factor = 16.0;

  // Optional planted test point: one extra slice is generated at this design
  // point and appended as the last slice.
  bool has_plant = false;
  std::vector<double> plant;

  // Generator values for a leading mode of size 2 (directly-learnt style).
  double sigma11 = 1.0;
  double sigma22 = 0.4;
  double rho = -0.05;
  // AR(1) correlation for the remaining middle modes (empirical style).
  double ar1 = 0.3;
};

// The generator settings land in the dataset's meta block for later scoring.
Dataset synth_dataset(const SynthOptions& opt);

// The true per-slice covariance the generator used (exposed for tests).
SpdMatrix synth_design_covariance(const SynthOptions& opt, const Matrix& design);

Matrix synth_design_grid(const SynthOptions& opt);

}  // namespace tgp
