#pragma once

#include "diagnostics.hpp"
#include "sampler.hpp"

namespace tgp {

// Training tensor with one test slice to append on the design-point mode.
// The design point of the test slice is the unknown being inferred.
struct AugmentedData {
  TensorK train;
  Matrix design;       // n x d, known design points of the training slices
  TensorK test_slice;  // (k-1)-order, same shape as one training slice
  bool has_test = true;
};

// New tensor with dims[mode] + 1; the extra slice goes last.
TensorK append_slice(const TensorK& t, int mode, const TensorK& slice);

// Samples s_test jointly with all GP unknowns given training + test data.
// With has_test = false this degenerates to the plain training run.
RunReport predict_joint(const AugmentedData& aug, const RunConfig& cfg, uint64_t chain_index = 0);

// Samples only s_test, with the GP unknowns frozen at the snapshot. Faster;
// the snapshot is never modified.
RunReport predict_from_modal(const AugmentedData& aug, const ModalSnapshot& snap,
                             const RunConfig& cfg, uint64_t chain_index = 0);

// Pulls q_1..q_d and (sigma11, sigma22, rho) out of a posterior summary at
// either the histogram mode or the mean.
ModalSnapshot snapshot_from_summary(const PosteriorSummary& s, int d, bool use_mean);

// Forward draw: mean + Z x_0 L_0 x_1 L_1 ..., Z i.i.d. standard normal. This
// inverts the likelihood's whitening, so draws score a finite log density.
TensorK sample_tensor_normal(const TensorNormalModel& model, CounterRng& rng);

// Observed vs predicted entries of one held-out slice, for the unit-slope
// model check.
struct SliceReport {
  int slice = 0;                      // 0-based index on the design-point mode
  std::vector<std::vector<int>> idx;  // per entry: 0-based indices over the slice modes
  std::vector<double> observed;
  std::vector<double> predicted;
  double pearson_r = 0.0;
  double rmse = 0.0;
  double slope = 0.0;  // predicted regressed on observed
  double acceptance = 0.0;
};

// Random-walk MH over every entry of slice `slice` (uniform priors, all other
// entries and the GP parameters held fixed at the snapshot). The prediction
// per entry is the mean of the last cfg.mc_tail samples.
SliceReport model_check_slice(const TensorK& data, const Matrix& design, int slice,
                              const ModalSnapshot& snap, const RunConfig& cfg);

void write_slice_report_csv(const SliceReport& r, const std::string& path);
void write_slice_report_stats(const SliceReport& r, const std::string& path);

}  // namespace tgp
