#include "synth.hpp"

#include <algorithm>
#include <cmath>

#include "prediction.hpp"
#include "text_io.hpp"

namespace tgp {

namespace {

// Factors n into d near-equal grid extents (largest divisor closest to the
// geometric mean first). A prime n and d=2 degenerates to 1 x n, which is
// still a valid grid.
std::vector<int> grid_extents(int n, int d) {
  std::vector<int> g(d, 1);
  int rem = n;
  for (int axis = 0; axis < d - 1; ++axis) {
    const double target = std::pow(static_cast<double>(rem), 1.0 / (d - axis));
    int best = 1;
    for (int f = 1; f <= rem; ++f)
      if (rem % f == 0 && std::abs(f - target) < std::abs(best - target)) best = f;
    g[axis] = best;
    rem /= best;
  }
  g[d - 1] = rem;
  return g;
}

std::vector<double> resolved_spacing(const SynthOptions& opt) {
  std::vector<double> h(opt.d);
  for (int c = 0; c < opt.d; ++c) {
    const double given = c < static_cast<int>(opt.spacing.size()) ? opt.spacing[c] : 0.0;
    h[c] = given > 0.0 ? given : std::sqrt(std::log(2.0) / opt.q[c]);
  }
  return h;
}

std::vector<double> resolved_center(const SynthOptions& opt) {
  std::vector<double> c(opt.d, 0.5);
  if (opt.d >= 1) c[0] = 2.0;                     // radial default, astronomical box
  if (opt.d >= 2) c[1] = 0.78539816339744831;     // pi/4
  for (int i = 0; i < opt.d && i < static_cast<int>(opt.center.size()); ++i)
    if (std::isfinite(opt.center[i])) c[i] = opt.center[i];
  return c;
}

double axis0_median(const Matrix& design) {
  std::vector<double> v;
  for (int i = 0; i < design.rows(); ++i) v.push_back(design(i, 0));
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

Matrix synth_design_grid(const SynthOptions& opt) {
  const int n = opt.dims.back();
  const auto g = grid_extents(n, opt.d);
  const auto h = resolved_spacing(opt);
  const auto c = resolved_center(opt);
  Matrix design(n, opt.d);
  for (int p = 0; p < n; ++p) {
    int rem = p;
    for (int axis = 0; axis < opt.d; ++axis) {
      const int i = rem % g[axis];
      rem /= g[axis];
      design(p, axis) = c[axis] + (i - 0.5 * (g[axis] - 1)) * h[axis];
    }
  }
  return design;
}

SpdMatrix synth_design_covariance(const SynthOptions& opt, const Matrix& design) {
  SqeInputKernel kern;
  kern.inv_length_scales = opt.q;
  if (!opt.two_regime) return input_kernel_matrix(kern, design);

  // Two regimes split at the median first-axis value: the upper regime's
  // first-axis smoothness is multiplied, and cross-regime covariance is cut
  // to zero. Block-diagonal of PD blocks stays PD.
  const double median = axis0_median(design);
  SqeInputKernel upper = kern;
  upper.inv_length_scales[0] *= opt.regime_q_factor;

  const int n = design.rows();
  SpdMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const bool ri = design(i, 0) > median;
    m(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      const bool rj = design(j, 0) > median;
      double v = 0.0;
      if (ri == rj) {
        const auto& qv = ri ? upper.inv_length_scales : kern.inv_length_scales;
        double e = 0.0;
        for (int c = 0; c < opt.d; ++c) {
          const double diff = design(i, c) - design(j, c);
          e += qv[c] * diff * diff;
        }
        v = std::exp(-e);
      }
      m(i, j) = m(j, i) = v;
    }
  }
  return m;
}

Dataset synth_dataset(const SynthOptions& opt) {
  const int k = static_cast<int>(opt.dims.size());
  if (k < 2) throw validation_error("synth: need a tensor order of at least 2");
  for (int m : opt.dims)
    if (m < 1) throw validation_error("synth: dims must be positive");
  if (opt.d < 1) throw validation_error("synth: d must be >= 1");
  if (static_cast<int>(opt.q.size()) != opt.d)
    throw validation_error("synth: need one smoothness value per input axis (" +
                           std::to_string(opt.d) + ")");
  for (double q : opt.q)
    if (!(q > 0.0)) throw validation_error("synth: smoothness values must be positive");
  if (opt.has_plant && static_cast<int>(opt.plant.size()) != opt.d)
    throw validation_error("synth: planted point needs " + std::to_string(opt.d) +
                           " coordinates");

  Matrix design = synth_design_grid(opt);
  if (opt.has_plant) {
    Matrix full(design.rows() + 1, opt.d);
    for (int i = 0; i < design.rows(); ++i)
      for (int c = 0; c < opt.d; ++c) full(i, c) = design(i, c);
    for (int c = 0; c < opt.d; ++c) full(design.rows(), c) = opt.plant[c];
    design = std::move(full);
  }
  const int n = design.rows();

  std::vector<int> dims = opt.dims;
  dims[k - 1] = n;

  TensorNormalModel model;
  model.mean = TensorK(dims, 0.0);
  model.modes.resize(k);
  for (int j = 0; j < k; ++j) {
    ModeCovariance& mc = model.modes[j];
    mc.strategy = CovStrategy::Empirical;
    if (j == k - 1) {
      mc.matrix = synth_design_covariance(opt, design);
    } else if (j == 0 && dims[0] == 2) {
      Sigma1Params s{opt.sigma11, opt.sigma22, opt.rho};
      if (!s.valid()) throw validation_error("synth: sigma11/sigma22/rho invalid");
      mc.matrix = s.matrix();
    } else {
      const int m = dims[j];
      mc.matrix = Matrix(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) mc.matrix(a, b) = std::pow(opt.ar1, std::abs(a - b));
    }
  }
  if (!model.refresh_factors()) throw numeric_error("synth: generator covariance not PD");

  CounterRng rng(opt.seed, 0x5E);
  Dataset ds;
  ds.tensor = sample_tensor_normal(model, rng);
  ds.design = std::move(design);

  auto listed = [](const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt_double(v[i]);
    return s;
  };
  ds.meta["synth_d"] = std::to_string(opt.d);
  ds.meta["synth_q"] = listed(opt.q);
  ds.meta["synth_seed"] = std::to_string(opt.seed);
  ds.meta["synth_spacing"] = listed(resolved_spacing(opt));
  ds.meta["synth_center"] = listed(resolved_center(opt));
  ds.meta["synth_sigma"] =
      fmt_double(opt.sigma11) + "," + fmt_double(opt.sigma22) + "," + fmt_double(opt.rho);
  ds.meta["synth_ar1"] = fmt_double(opt.ar1);
  if (opt.two_regime) {
    ds.meta["synth_two_regime"] = "true";
    ds.meta["synth_regime_q_factor"] = fmt_double(opt.regime_q_factor);
    ds.meta["synth_regime_split"] = fmt_double(axis0_median(ds.design));
  }
  if (opt.has_plant) ds.meta["synth_plant"] = listed(opt.plant);
  return ds;
}

}  // namespace tgp
