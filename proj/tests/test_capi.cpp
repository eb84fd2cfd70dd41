#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <vector>

#include "tensorgp/tensorgp.h"

TEST_SUITE("capi") {

TEST_CASE("synth, write, read, train, summarise through the C surface") {
  tgp_synth_opts opt;
  tgp_synth_opts_init(&opt);
  opt.k = 3;
  opt.dims[0] = 2;
  opt.dims[1] = 3;
  opt.dims[2] = 24;
  opt.design_dim = 1;
  opt.q[0] = 4.0;
  opt.seed = 11;

  tgp_dataset* ds = nullptr;
  REQUIRE(tgp_synth(&opt, &ds) == TGP_OK);
  int k = 0, d = 0, dims[8];
  REQUIRE(tgp_dataset_order(ds, &k) == TGP_OK);
  REQUIRE(tgp_dataset_dims(ds, dims, 8) == TGP_OK);
  REQUIRE(tgp_dataset_design_dim(ds, &d) == TGP_OK);
  CHECK(k == 3);
  CHECK(dims[2] == 24);
  CHECK(d == 1);

  REQUIRE(tgp_dataset_write(ds, "capi_ds.bin") == TGP_OK);
  tgp_dataset* back = nullptr;
  REQUIRE(tgp_dataset_read("capi_ds.bin", &back) == TGP_OK);

  tgp_config* cfg = nullptr;
  REQUIRE(tgp_config_create(&cfg) == TGP_OK);
  REQUIRE(tgp_config_set(cfg, "run.iterations", "400") == TGP_OK);
  REQUIRE(tgp_config_set(cfg, "run.seed", "21") == TGP_OK);
  REQUIRE(tgp_config_set(cfg, "init.ell", "0.3") == TGP_OK);
  REQUIRE(tgp_config_set(cfg, "proposals.v_ell", "0.001") == TGP_OK);
  CHECK(tgp_config_set(cfg, "run.nonsense", "1") == TGP_ERR_VALIDATION);
  CHECK(std::strlen(tgp_last_error()) > 0);

  long long iters = 0;
  REQUIRE(tgp_config_get_int(cfg, "run.iterations", &iters) == TGP_OK);
  CHECK(iters == 400);

  tgp_report* rep = nullptr;
  REQUIRE(tgp_train(back, cfg, 0, &rep) == TGP_OK);
  CHECK(tgp_report_iterations(rep) == 400);

  std::vector<double> ell(400);
  int n = 0;
  REQUIRE(tgp_report_column(rep, "ell_1", ell.data(), 400, &n) == TGP_OK);
  CHECK(n == 400);
  for (double v : ell) CHECK(v > 0.0);
  double acc = 0.0;
  REQUIRE(tgp_report_acceptance(rep, "ell", &acc) == TGP_OK);
  CHECK(acc > 0.0);
  CHECK(acc <= 1.0);

  tgp_summary* sum = nullptr;
  REQUIRE(tgp_report_summarize(rep, 0.5, &sum) == TGP_OK);
  double q_mode = 0.0;
  REQUIRE(tgp_summary_lookup(sum, "q_1", "mode", &q_mode) == TGP_OK);
  CHECK(q_mode > 0.0);
  REQUIRE(tgp_summary_write(sum, "capi_sum.csv", nullptr) == TGP_OK);
  tgp_summary* sum2 = nullptr;
  REQUIRE(tgp_summary_read("capi_sum.csv", &sum2) == TGP_OK);
  double q_mode2 = 0.0;
  REQUIRE(tgp_summary_lookup(sum2, "q_1", "mode", &q_mode2) == TGP_OK);
  CHECK(q_mode2 == q_mode);

  REQUIRE(tgp_report_write_trace(rep, "capi_trace.csv") == TGP_OK);

  tgp_summary_free(sum2);
  tgp_summary_free(sum);
  tgp_report_free(rep);
  tgp_config_free(cfg);
  tgp_dataset_free(back);
  tgp_dataset_free(ds);
  std::remove("capi_ds.bin");
  std::remove("capi_sum.csv");
  std::remove("capi_trace.csv");
}

TEST_CASE("prediction path and pooled summaries") {
  tgp_synth_opts opt;
  tgp_synth_opts_init(&opt);
  opt.k = 3;
  opt.dims[0] = 2;
  opt.dims[1] = 3;
  opt.dims[2] = 16;
  opt.design_dim = 1;
  opt.q[0] = 4.0;
  opt.seed = 12;
  opt.has_plant = 1;
  opt.plant[0] = 2.05;

  tgp_dataset* full = nullptr;
  REQUIRE(tgp_synth(&opt, &full) == TGP_OK);
  tgp_dataset* train = nullptr;
  tgp_dataset* test = nullptr;
  REQUIRE(tgp_dataset_split_last(full, &train, &test) == TGP_OK);

  tgp_config* cfg = nullptr;
  REQUIRE(tgp_config_create(&cfg) == TGP_OK);
  REQUIRE(tgp_config_set(cfg, "run.iterations", "600") == TGP_OK);
  REQUIRE(tgp_config_set(cfg, "init.ell", "0.25") == TGP_OK);
  REQUIRE(tgp_config_set(cfg, "proposals.v_ell", "0.001") == TGP_OK);
  REQUIRE(tgp_config_set(cfg, "predict.bounds", "1.8:2.3") == TGP_OK);

  tgp_report* joint = nullptr;
  REQUIRE(tgp_predict_joint(train, test, cfg, 0, &joint) == TGP_OK);
  std::vector<double> s1(600);
  int n = 0;
  REQUIRE(tgp_report_column(joint, "s1_test", s1.data(), 600, &n) == TGP_OK);
  for (double v : s1) {
    CHECK(v >= 1.8);
    CHECK(v <= 2.3);
  }

  // pooled summary of two independent chains
  tgp_report* chain2 = nullptr;
  REQUIRE(tgp_predict_joint(train, test, cfg, 1, &chain2) == TGP_OK);
  const tgp_report* reps[2] = {joint, chain2};
  tgp_summary* pooled = nullptr;
  REQUIRE(tgp_reports_summarize(reps, 2, 0.5, &pooled) == TGP_OK);
  double mean1 = 0.0;
  REQUIRE(tgp_summary_lookup(pooled, "s1_test", "mean", &mean1) == TGP_OK);
  CHECK(mean1 >= 1.8);
  CHECK(mean1 <= 2.3);

  // modal scheme from a freshly trained summary
  tgp_report* trained = nullptr;
  REQUIRE(tgp_train(train, cfg, 0, &trained) == TGP_OK);
  tgp_summary* tsum = nullptr;
  REQUIRE(tgp_report_summarize(trained, 0.5, &tsum) == TGP_OK);
  tgp_report* modal = nullptr;
  REQUIRE(tgp_predict_modal(train, test, cfg, tsum, 0, 0, &modal) == TGP_OK);
  REQUIRE(tgp_report_column(modal, "s1_test", s1.data(), 600, &n) == TGP_OK);
  CHECK(n == 600);

  // model check against the trained summary
  double r = 0, rmse = 0, slope = 0;
  REQUIRE(tgp_config_set(cfg, "modelcheck.iterations", "1500") == TGP_OK);
  REQUIRE(tgp_config_set(cfg, "modelcheck.tail", "300") == TGP_OK);
  REQUIRE(tgp_model_check(train, cfg, tsum, 0, 8, nullptr, nullptr, &r, &rmse, &slope) ==
          TGP_OK);
  CHECK(std::isfinite(r));
  CHECK(rmse >= 0.0);
  CHECK(tgp_model_check(train, cfg, tsum, 0, 99, nullptr, nullptr, &r, &rmse, &slope) ==
        TGP_ERR_VALIDATION);  // slice out of range

  tgp_report_free(modal);
  tgp_summary_free(tsum);
  tgp_report_free(trained);
  tgp_summary_free(pooled);
  tgp_report_free(chain2);
  tgp_report_free(joint);
  tgp_config_free(cfg);
  tgp_dataset_free(test);
  tgp_dataset_free(train);
  tgp_dataset_free(full);
}

TEST_CASE("error paths set messages and codes") {
  tgp_dataset* ds = nullptr;
  CHECK(tgp_dataset_read("/nonexistent/file.csv", &ds) == TGP_ERR_IO);
  CHECK(std::strlen(tgp_last_error()) > 0);

  tgp_config* cfg = nullptr;
  CHECK(tgp_config_read("/nonexistent/file.cfg", &cfg) == TGP_ERR_IO);

  double lo = 0, hi = 0;
  std::vector<double> tiny(5, 1.0);
  CHECK(tgp_hpd(tiny.data(), 5, 0.95, &lo, &hi) == TGP_ERR_VALIDATION);

  std::vector<double> s(100);
  for (int i = 0; i < 100; ++i) s[i] = i + 1;
  CHECK(tgp_hpd(s.data(), 100, 0.95, &lo, &hi) == TGP_OK);
  CHECK(hi - lo == 94.0);

  double unit = 0, omega = 0;
  CHECK(tgp_galactic_convert(2.0, &unit, &omega) == TGP_OK);
  CHECK(unit == 4.0);
  CHECK(omega == 55.0);
  CHECK(tgp_galactic_convert(0.0, &unit, &omega) == TGP_ERR_VALIDATION);
}

}  // TEST_SUITE
