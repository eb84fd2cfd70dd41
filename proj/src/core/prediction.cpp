#include "prediction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "text_io.hpp"

namespace tgp {

TensorK append_slice(const TensorK& t, int mode, const TensorK& slice) {
  std::vector<int> dims = t.dims();
  dims[mode] += 1;
  TensorK out(dims);
  for (int i = 0; i < t.dim(mode); ++i) set_slice(out, {mode, i}, get_slice(t, {mode, i}));
  set_slice(out, {mode, t.dim(mode)}, slice);
  return out;
}

RunReport predict_joint(const AugmentedData& aug, const RunConfig& cfg, uint64_t chain_index) {
  const int kmode = cfg.kernel_mode == 0 ? aug.train.order() - 1 : cfg.kernel_mode - 1;
  if (!aug.has_test) return run_chain(aug.train, aug.design, cfg, RunMode::Train, nullptr,
                                      chain_index);
  const TensorK full = append_slice(aug.train, kmode, aug.test_slice);
  return run_chain(full, aug.design, cfg, RunMode::PredictJoint, nullptr, chain_index);
}

RunReport predict_from_modal(const AugmentedData& aug, const ModalSnapshot& snap,
                             const RunConfig& cfg, uint64_t chain_index) {
  if (!aug.has_test) throw validation_error("predict_from_modal: no test slice supplied");
  const int kmode = cfg.kernel_mode == 0 ? aug.train.order() - 1 : cfg.kernel_mode - 1;
  const TensorK full = append_slice(aug.train, kmode, aug.test_slice);
  return run_chain(full, aug.design, cfg, RunMode::PredictModal, &snap, chain_index);
}

ModalSnapshot snapshot_from_summary(const PosteriorSummary& s, int d, bool use_mean) {
  ModalSnapshot snap;
  snap.q.resize(d);
  for (int c = 0; c < d; ++c) {
    const ParamSummary* p = s.find("q_" + std::to_string(c + 1));
    if (!p)
      throw validation_error("snapshot: summary has no q_" + std::to_string(c + 1) + " row");
    snap.q[c] = use_mean ? p->mean : p->mode;
  }
  const ParamSummary* s11 = s.find("sigma11");
  const ParamSummary* s22 = s.find("sigma22");
  const ParamSummary* rho = s.find("rho");
  if (s11 && s22 && rho) {
    snap.sigma.s11 = use_mean ? s11->mean : s11->mode;
    snap.sigma.s22 = use_mean ? s22->mean : s22->mode;
    snap.sigma.rho = use_mean ? rho->mean : rho->mode;
    snap.has_sigma = true;
  }
  return snap;
}

TensorK sample_tensor_normal(const TensorNormalModel& model, CounterRng& rng) {
  TensorK z(model.mean.dims());
  for (size_t i = 0; i < z.size(); ++i) z[i] = rng.next_normal();
  TensorK x = std::move(z);
  for (int j = 0; j < model.mean.order(); ++j) {
    const ModeCovariance& mc = model.modes[j];
    const Matrix& lower = mc.factor ? mc.factor->lower : cholesky(mc.matrix).lower;
    x = mode_product(x, lower, j);
  }
  for (size_t i = 0; i < x.size(); ++i) x[i] += model.mean[i];
  return x;
}

namespace {

void fit_stats(SliceReport& r) {
  const size_t n = r.observed.size();
  double mo = 0.0, mp = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mo += r.observed[i];
    mp += r.predicted[i];
  }
  mo /= n;
  mp /= n;
  double soo = 0.0, spp = 0.0, sop = 0.0, se = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double o = r.observed[i] - mo;
    const double p = r.predicted[i] - mp;
    soo += o * o;
    spp += p * p;
    sop += o * p;
    const double e = r.predicted[i] - r.observed[i];
    se += e * e;
  }
  r.pearson_r = (soo > 0.0 && spp > 0.0) ? sop / std::sqrt(soo * spp) : 0.0;
  r.slope = soo > 0.0 ? sop / soo : 0.0;
  r.rmse = std::sqrt(se / n);
}

}  // namespace

SliceReport model_check_slice(const TensorK& data, const Matrix& design, int slice,
                              const ModalSnapshot& snap, const RunConfig& cfg) {
  RunConfig rc = cfg;
  rc.validate();
  const int k = data.order();
  const int d = design.cols();
  rc.resolve_axes(d);
  const int kmode = rc.kernel_mode == 0 ? k - 1 : rc.kernel_mode - 1;
  if (design.rows() != data.dim(kmode))
    throw validation_error("model_check_slice: design rows vs kernel mode size mismatch");
  if (slice < 0 || slice >= data.dim(kmode))
    throw validation_error("model_check_slice: slice " + std::to_string(slice) +
                           " out of range 0.." + std::to_string(data.dim(kmode) - 1));
  if (static_cast<int>(snap.q.size()) != d)
    throw validation_error("model_check_slice: snapshot has wrong input dimension");

  int direct_mode = -1;
  if (rc.direct_mode == 0) {
    direct_mode = (kmode != 0 && data.dim(0) == 2) ? 0 : -1;
  } else if (rc.direct_mode != RunConfig::kNoDirectMode) {
    direct_mode = rc.direct_mode - 1;
  }
  if (direct_mode >= 0 && !snap.has_sigma)
    throw validation_error("model_check_slice: snapshot lacks sigma values for the direct mode");

  // Frozen model: mean and empirical covariances from the full observed data,
  // kernel and direct modes at the snapshot values.
  const TensorK mean = empirical_mean(data, kmode);
  std::vector<CholFactor> own;
  own.reserve(k);
  std::vector<const CholFactor*> factors(k);
  for (int j = 0; j < k; ++j) {
    SpdMatrix m;
    if (j == kmode) {
      SqeInputKernel kern;
      kern.inv_length_scales = snap.q;
      m = input_kernel_matrix(kern, design);
    } else if (j == direct_mode) {
      m = snap.sigma.matrix();
    } else if (data.dim(j) == 1) {
      m = Matrix(1, 1);
      m(0, 0) = 1.0;
    } else {
      m = empirical_covariance(data, j, kmode);
    }
    own.push_back(cholesky(m));
    factors[j] = &own.back();
  }

  // Uniform prior box and proposal scale from the observed data spread.
  double lo = data[0], hi = data[0], sum = 0.0, sum2 = 0.0;
  for (double x : data.data()) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    sum += x;
    sum2 += x * x;
  }
  const double range = hi > lo ? hi - lo : 1.0;
  const double bound_lo = lo - rc.mc_prior_pad * range;
  const double bound_hi = hi + rc.mc_prior_pad * range;
  const double entry_sd =
      std::sqrt(std::max(sum2 / data.size() - (sum / data.size()) * (sum / data.size()), 1e-12));

  const TensorK observed_slice = get_slice(data, {kmode, slice});
  const size_t nu = observed_slice.size();
  double step_sd = rc.mc_step_scale * entry_sd * 2.38 / std::sqrt(static_cast<double>(nu));

  TensorK work = data;
  TensorK cur = get_slice(mean, {kmode, slice});  // start from the estimated mean
  set_slice(work, {kmode, slice}, cur);
  double cur_lp = tensor_normal_logpdf(work, mean, factors);

  CounterRng rng(rc.seed, 0x6d63ULL * 1000003ULL + static_cast<uint64_t>(slice));
  std::vector<double> tail_sum(nu, 0.0);
  long accepts = 0;
  long window_att = 0, window_acc = 0;

  TensorK prop = cur;
  for (int it = 1; it <= rc.mc_iterations; ++it) {
    bool in_bounds = true;
    for (size_t e = 0; e < nu; ++e) {
      prop[e] = cur[e] + step_sd * rng.next_normal();
      if (prop[e] < bound_lo || prop[e] > bound_hi) in_bounds = false;
    }
    ++window_att;
    if (in_bounds) {
      set_slice(work, {kmode, slice}, prop);
      const double lp = tensor_normal_logpdf(work, mean, factors);
      if (std::log(rng.next_unit()) < lp - cur_lp) {
        cur = prop;
        cur_lp = lp;
        ++accepts;
        ++window_acc;
      } else {
        set_slice(work, {kmode, slice}, cur);
      }
    }
    if (rc.mc_adapt && it <= rc.mc_iterations / 2 && it % 200 == 0) {
      const double rate = static_cast<double>(window_acc) / window_att;
      if (rate < 0.2)
        step_sd *= 0.7;
      else if (rate > 0.4)
        step_sd *= 1.4;
      window_att = window_acc = 0;
    }
    if (it > rc.mc_iterations - rc.mc_tail)
      for (size_t e = 0; e < nu; ++e) tail_sum[e] += cur[e];
  }

  SliceReport rep;
  rep.slice = slice;
  rep.observed = observed_slice.data();
  rep.predicted.resize(nu);
  for (size_t e = 0; e < nu; ++e) rep.predicted[e] = tail_sum[e] / rc.mc_tail;
  rep.acceptance = static_cast<double>(accepts) / rc.mc_iterations;

  // Multi-indices over the slice modes, fastest mode first (flat order).
  const auto& sdims = observed_slice.dims();
  rep.idx.resize(nu);
  for (size_t e = 0; e < nu; ++e) {
    size_t rem = e;
    rep.idx[e].resize(sdims.size());
    for (size_t j = 0; j < sdims.size(); ++j) {
      rep.idx[e][j] = static_cast<int>(rem % sdims[j]);
      rem /= sdims[j];
    }
  }
  fit_stats(rep);
  return rep;
}

void write_slice_report_csv(const SliceReport& r, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot write slice report " + path);
  const size_t nmodes = r.idx.empty() ? 0 : r.idx[0].size();
  for (size_t j = 0; j < nmodes; ++j) f << "mode" << (j + 1) << "_idx,";
  f << "observed,predicted\n";
  for (size_t e = 0; e < r.observed.size(); ++e) {
    for (size_t j = 0; j < nmodes; ++j) f << (r.idx[e][j] + 1) << ",";
    f << fmt_double(r.observed[e]) << "," << fmt_double(r.predicted[e]) << "\n";
  }
  if (!f) throw io_error("failed writing slice report " + path);
}

void write_slice_report_stats(const SliceReport& r, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot write slice stats " + path);
  f << "slice = " << (r.slice + 1) << "\n";
  f << "r = " << fmt_double(r.pearson_r) << "\n";
  f << "rmse = " << fmt_double(r.rmse) << "\n";
  f << "slope = " << fmt_double(r.slope) << "\n";
  f << "acceptance = " << fmt_double(r.acceptance) << "\n";
}

}  // namespace tgp
