#include "tensorgp/tensorgp.h"

#include <cmath>
#include <cstring>
#include <string>

#include "core/dataset.hpp"
#include "core/diagnostics.hpp"
#include "core/prediction.hpp"
#include "core/run_config.hpp"
#include "core/sampler.hpp"
#include "core/synth.hpp"

struct tgp_dataset {
  tgp::Dataset d;
};
struct tgp_config {
  tgp::RunConfig c;
};
struct tgp_report {
  tgp::RunReport r;
};
struct tgp_summary {
  tgp::PosteriorSummary s;
};

namespace {

thread_local std::string g_last_error = "";

template <typename Fn>
tgp_status guarded(Fn&& fn) {
  try {
    fn();
    return TGP_OK;
  } catch (const tgp::io_error& e) {
    g_last_error = e.what();
    return TGP_ERR_IO;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return TGP_ERR_VALIDATION;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TGP_ERR_NUMERIC;
  }
}

tgp_status fail_validation(const std::string& msg) {
  g_last_error = msg;
  return TGP_ERR_VALIDATION;
}

// Test dataset = one slice on the design-point mode, remaining dims equal.
tgp::TensorK test_slice_of(const tgp::Dataset& train, const tgp::Dataset& test) {
  const int k = train.tensor.order();
  if (test.tensor.order() != k)
    throw tgp::validation_error("predict: test tensor order differs from training order");
  for (int j = 0; j < k - 1; ++j)
    if (test.tensor.dim(j) != train.tensor.dim(j))
      throw tgp::validation_error("predict: test tensor dims differ from training dims");
  if (test.tensor.dim(k - 1) != 1)
    throw tgp::validation_error("predict: test tensor must hold exactly one slice");
  return tgp::get_slice(test.tensor, {k - 1, 0});
}

}  // namespace

extern "C" {

const char* tgp_last_error(void) { return g_last_error.c_str(); }

/* ---- datasets -------------------------------------------------------- */

tgp_status tgp_dataset_read(const char* path, tgp_dataset** out) {
  if (!path || !out) return fail_validation("tgp_dataset_read: null argument");
  return guarded([&] { *out = new tgp_dataset{tgp::read_dataset(path)}; });
}

tgp_status tgp_dataset_write(const tgp_dataset* ds, const char* path) {
  if (!ds || !path) return fail_validation("tgp_dataset_write: null argument");
  return guarded([&] { tgp::write_dataset(ds->d, path); });
}

void tgp_dataset_free(tgp_dataset* ds) { delete ds; }

tgp_status tgp_dataset_order(const tgp_dataset* ds, int* k) {
  if (!ds || !k) return fail_validation("tgp_dataset_order: null argument");
  *k = ds->d.tensor.order();
  return TGP_OK;
}

tgp_status tgp_dataset_dims(const tgp_dataset* ds, int* dims, int cap) {
  if (!ds || !dims) return fail_validation("tgp_dataset_dims: null argument");
  if (cap < ds->d.tensor.order()) return fail_validation("tgp_dataset_dims: capacity too small");
  for (int j = 0; j < ds->d.tensor.order(); ++j) dims[j] = ds->d.tensor.dim(j);
  return TGP_OK;
}

tgp_status tgp_dataset_design_dim(const tgp_dataset* ds, int* d) {
  if (!ds || !d) return fail_validation("tgp_dataset_design_dim: null argument");
  *d = ds->d.design_dim();
  return TGP_OK;
}

tgp_status tgp_dataset_split_last(const tgp_dataset* ds, tgp_dataset** train,
                                  tgp_dataset** test) {
  if (!ds || !train || !test) return fail_validation("tgp_dataset_split_last: null argument");
  return guarded([&] {
    auto* tr = new tgp_dataset;
    auto* te = new tgp_dataset;
    try {
      tgp::split_last_slice(ds->d, tr->d, te->d);
    } catch (...) {
      delete tr;
      delete te;
      throw;
    }
    *train = tr;
    *test = te;
  });
}

/* ---- synthetic data --------------------------------------------------- */

void tgp_synth_opts_init(tgp_synth_opts* opt) {
  if (!opt) return;
  std::memset(opt, 0, sizeof(*opt));
  opt->k = 3;
  opt->dims[0] = 2;
  opt->dims[1] = 10;
  opt->dims[2] = 64;
  opt->design_dim = 2;
  opt->q[0] = 3800.0;
  opt->q[1] = 72.0;
  opt->seed = 1;
  for (int i = 0; i < TGP_MAX_ORDER; ++i) opt->center[i] = NAN;
  opt->regime_q_factor = 16.0;
  opt->sigma11 = 1.0;
  opt->sigma22 = 0.4;
  opt->rho = -0.05;
  opt->ar1 = 0.3;
}

tgp_status tgp_synth(const tgp_synth_opts* opt, tgp_dataset** out) {
  if (!opt || !out) return fail_validation("tgp_synth: null argument");
  return guarded([&] {
    if (opt->k < 2 || opt->k > TGP_MAX_ORDER)
      throw tgp::validation_error("tgp_synth: tensor order must be in 2.." +
                                  std::to_string(TGP_MAX_ORDER));
    if (opt->design_dim < 1 || opt->design_dim > TGP_MAX_ORDER)
      throw tgp::validation_error("tgp_synth: bad design dimension");
    tgp::SynthOptions o;
    o.dims.assign(opt->dims, opt->dims + opt->k);
    o.d = opt->design_dim;
    o.q.assign(opt->q, opt->q + opt->design_dim);
    o.seed = opt->seed;
    o.center.assign(opt->center, opt->center + opt->design_dim);
    o.spacing.assign(opt->spacing, opt->spacing + opt->design_dim);
    o.two_regime = opt->two_regime != 0;
    o.regime_q_factor = opt->regime_q_factor;
    o.has_plant = opt->has_plant != 0;
    if (o.has_plant) o.plant.assign(opt->plant, opt->plant + opt->design_dim);
    o.sigma11 = opt->sigma11;
    o.sigma22 = opt->sigma22;
    o.rho = opt->rho;
    o.ar1 = opt->ar1;
    *out = new tgp_dataset{tgp::synth_dataset(o)};
  });
}

/* ---- configuration ---------------------------------------------------- */

tgp_status tgp_config_create(tgp_config** out) {
  if (!out) return fail_validation("tgp_config_create: null argument");
  return guarded([&] { *out = new tgp_config{}; });
}

tgp_status tgp_config_read(const char* path, tgp_config** out) {
  if (!path || !out) return fail_validation("tgp_config_read: null argument");
  return guarded([&] { *out = new tgp_config{tgp::read_config_file(path)}; });
}

tgp_status tgp_config_write(const tgp_config* cfg, const char* path) {
  if (!cfg || !path) return fail_validation("tgp_config_write: null argument");
  return guarded([&] { tgp::write_config_file(cfg->c, path); });
}

tgp_status tgp_config_set(tgp_config* cfg, const char* dotted_key, const char* value) {
  if (!cfg || !dotted_key || !value) return fail_validation("tgp_config_set: null argument");
  return guarded([&] {
    tgp::config_set(cfg->c, dotted_key, value);
    cfg->c.validate();
  });
}

uint64_t tgp_config_hash(const tgp_config* cfg) {
  return cfg ? tgp::config_hash(cfg->c) : 0;
}

tgp_status tgp_config_get_int(const tgp_config* cfg, const char* dotted_key, long long* out) {
  if (!cfg || !dotted_key || !out) return fail_validation("tgp_config_get_int: null argument");
  const std::string key = dotted_key;
  if (key == "run.iterations")
    *out = cfg->c.iterations;
  else if (key == "run.chains")
    *out = cfg->c.chains;
  else if (key == "run.seed")
    *out = static_cast<long long>(cfg->c.seed);
  else if (key == "run.t0")
    *out = cfg->c.t0;
  else if (key == "modelcheck.iterations")
    *out = cfg->c.mc_iterations;
  else
    return fail_validation("tgp_config_get_int: no integer key '" + key + "'");
  return TGP_OK;
}

void tgp_config_free(tgp_config* cfg) { delete cfg; }

/* ---- runs -------------------------------------------------------------- */

tgp_status tgp_train(const tgp_dataset* ds, const tgp_config* cfg, uint64_t chain_index,
                     tgp_report** out) {
  if (!ds || !cfg || !out) return fail_validation("tgp_train: null argument");
  return guarded([&] {
    *out = new tgp_report{
        tgp::run_chain(ds->d.tensor, ds->d.design, cfg->c, tgp::RunMode::Train, nullptr,
                       chain_index)};
  });
}

tgp_status tgp_predict_joint(const tgp_dataset* train, const tgp_dataset* test,
                             const tgp_config* cfg, uint64_t chain_index, tgp_report** out) {
  if (!train || !test || !cfg || !out) return fail_validation("tgp_predict_joint: null argument");
  return guarded([&] {
    tgp::AugmentedData aug{train->d.tensor, train->d.design, test_slice_of(train->d, test->d),
                           true};
    *out = new tgp_report{tgp::predict_joint(aug, cfg->c, chain_index)};
  });
}

tgp_status tgp_predict_modal(const tgp_dataset* train, const tgp_dataset* test,
                             const tgp_config* cfg, const tgp_summary* summary, int use_mean,
                             uint64_t chain_index, tgp_report** out) {
  if (!train || !test || !cfg || !summary || !out)
    return fail_validation("tgp_predict_modal: null argument");
  return guarded([&] {
    tgp::AugmentedData aug{train->d.tensor, train->d.design, test_slice_of(train->d, test->d),
                           true};
    const tgp::ModalSnapshot snap =
        tgp::snapshot_from_summary(summary->s, train->d.design_dim(), use_mean != 0);
    *out = new tgp_report{tgp::predict_from_modal(aug, snap, cfg->c, chain_index)};
  });
}

tgp_status tgp_model_check(const tgp_dataset* ds, const tgp_config* cfg,
                           const tgp_summary* summary, int use_mean, int slice,
                           const char* csv_path, const char* stats_path, double* r_out,
                           double* rmse_out, double* slope_out) {
  if (!ds || !cfg || !summary) return fail_validation("tgp_model_check: null argument");
  return guarded([&] {
    const tgp::ModalSnapshot snap =
        tgp::snapshot_from_summary(summary->s, ds->d.design_dim(), use_mean != 0);
    const tgp::SliceReport rep =
        tgp::model_check_slice(ds->d.tensor, ds->d.design, slice - 1, snap, cfg->c);
    if (csv_path) tgp::write_slice_report_csv(rep, csv_path);
    if (stats_path) tgp::write_slice_report_stats(rep, stats_path);
    if (r_out) *r_out = rep.pearson_r;
    if (rmse_out) *rmse_out = rep.rmse;
    if (slope_out) *slope_out = rep.slope;
  });
}

/* ---- reports and summaries --------------------------------------------- */

tgp_status tgp_report_write_trace(const tgp_report* rep, const char* path) {
  if (!rep || !path) return fail_validation("tgp_report_write_trace: null argument");
  return guarded([&] { tgp::write_trace_csv(rep->r, path); });
}

int tgp_report_iterations(const tgp_report* rep) { return rep ? rep->r.iterations() : 0; }

tgp_status tgp_report_column(const tgp_report* rep, const char* name, double* out, int cap,
                             int* n) {
  if (!rep || !name || !out || !n) return fail_validation("tgp_report_column: null argument");
  return guarded([&] {
    const auto& col = rep->r.column(name);
    if (cap < static_cast<int>(col.size()))
      throw tgp::validation_error("tgp_report_column: capacity too small");
    std::memcpy(out, col.data(), col.size() * sizeof(double));
    *n = static_cast<int>(col.size());
  });
}

tgp_status tgp_report_acceptance(const tgp_report* rep, const char* block, double* out) {
  if (!rep || !block || !out) return fail_validation("tgp_report_acceptance: null argument");
  auto it = rep->r.acceptance.find(block);
  if (it == rep->r.acceptance.end())
    return fail_validation("tgp_report_acceptance: no block '" + std::string(block) + "'");
  *out = it->second;
  return TGP_OK;
}

void tgp_report_free(tgp_report* rep) { delete rep; }

tgp_status tgp_report_summarize(const tgp_report* rep, double burnin_frac, tgp_summary** out) {
  if (!rep || !out) return fail_validation("tgp_report_summarize: null argument");
  return guarded([&] { *out = new tgp_summary{tgp::summarize(rep->r, burnin_frac)}; });
}

tgp_status tgp_reports_summarize(const tgp_report* const* reps, int n_reports,
                                 double burnin_frac, tgp_summary** out) {
  if (!reps || n_reports < 1 || !out)
    return fail_validation("tgp_reports_summarize: null argument");
  return guarded([&] {
    std::vector<const tgp::RunReport*> rs;
    for (int i = 0; i < n_reports; ++i) {
      if (!reps[i]) throw tgp::validation_error("tgp_reports_summarize: null report");
      rs.push_back(&reps[i]->r);
    }
    *out = new tgp_summary{tgp::summarize_pooled(rs, burnin_frac)};
  });
}

tgp_status tgp_summary_read(const char* csv_path, tgp_summary** out) {
  if (!csv_path || !out) return fail_validation("tgp_summary_read: null argument");
  return guarded([&] { *out = new tgp_summary{tgp::read_summary_csv(csv_path)}; });
}

tgp_status tgp_summary_write(const tgp_summary* s, const char* csv_path, const char* txt_path) {
  if (!s) return fail_validation("tgp_summary_write: null argument");
  return guarded([&] {
    if (csv_path) tgp::write_summary_csv(s->s, csv_path);
    if (txt_path) tgp::write_summary_text(s->s, txt_path);
  });
}

tgp_status tgp_summary_lookup(const tgp_summary* s, const char* param, const char* field,
                              double* out) {
  if (!s || !param || !field || !out) return fail_validation("tgp_summary_lookup: null argument");
  const tgp::ParamSummary* p = s->s.find(param);
  if (!p) return fail_validation("tgp_summary_lookup: no parameter '" + std::string(param) + "'");
  const std::string f = field;
  if (f == "mean")
    *out = p->mean;
  else if (f == "mode")
    *out = p->mode;
  else if (f == "sd")
    *out = p->sd;
  else if (f == "hpd_lo")
    *out = p->hpd95.lo;
  else if (f == "hpd_hi")
    *out = p->hpd95.hi;
  else if (f == "geweke")
    *out = p->geweke;
  else
    return fail_validation("tgp_summary_lookup: no field '" + f + "'");
  return TGP_OK;
}

void tgp_summary_free(tgp_summary* s) { delete s; }

/* ---- helpers ------------------------------------------------------------ */

tgp_status tgp_hpd(const double* samples, int n, double mass, double* lo, double* hi) {
  if (!samples || !lo || !hi) return fail_validation("tgp_hpd: null argument");
  return guarded([&] {
    const auto h = tgp::hpd(std::vector<double>(samples, samples + n), mass);
    *lo = h.lo;
    *hi = h.hi;
  });
}

tgp_status tgp_galactic_convert(double s1, double* unit_kpc, double* omega_bar) {
  if (!unit_kpc || !omega_bar) return fail_validation("tgp_galactic_convert: null argument");
  return guarded([&] {
    const auto g = tgp::galactic_convert(s1, {0.0, 0.0, 0.95});
    *unit_kpc = g.length_unit_kpc;
    *omega_bar = g.omega_bar_kms_kpc;
  });
}

}  // extern "C"
