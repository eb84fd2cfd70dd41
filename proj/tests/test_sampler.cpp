#include <doctest.h>

#include <cstring>
#include <fstream>

#include "core/diagnostics.hpp"
#include "core/sampler.hpp"
#include "core/synth.hpp"
#include "core/text_io.hpp"
#include "test_support.hpp"

using namespace tgp;

namespace {

// k=2 stationary synthetic set shared by the recovery-style cases. The design
// mode is kept large relative to the replicate mode so the plug-in mean/
// covariance estimates do not dominate the posterior width.
Dataset recovery_data(uint64_t seed) {
  SynthOptions opt;
  opt.dims = {2, 128};
  opt.d = 1;
  opt.q = {4.0};
  opt.seed = seed;
  return synth_dataset(opt);
}

RunConfig recovery_config() {
  RunConfig cfg;
  cfg.flavour = ModelFlavour::Nonnested;
  cfg.iterations = 4000;
  cfg.direct_mode = RunConfig::kNoDirectMode;
  cfg.ell0 = {0.4};  // true value is 1/q = 0.25
  cfg.ell_prior_sd_scale = 10.0;
  cfg.v_ell = {0.0025};
  return cfg;
}

bool overlaps(const HpdInterval& a, const HpdInterval& b) {
  return a.lo <= b.hi && b.lo <= a.hi;
}

}  // namespace

TEST_SUITE("sampler") {

TEST_CASE("zero proposal variance keeps the length scale fixed and accepted") {
  Dataset ds = recovery_data(1);
  RunConfig cfg = recovery_config();
  cfg.iterations = 100;
  cfg.v_ell = {0.0};
  RunReport rep = run_chain(ds.tensor, ds.design, cfg);
  const auto& ell = rep.column("ell_1");
  for (double v : ell) CHECK(v == 0.4);
  CHECK(rep.acceptance.at("ell") == 1.0);  // identical proposals always accepted
}

TEST_CASE("single sweep produces a single-row report") {
  Dataset ds = recovery_data(2);
  RunConfig cfg = recovery_config();
  cfg.iterations = 1;
  RunReport rep = run_chain(ds.tensor, ds.design, cfg);
  CHECK(rep.iterations() == 1);
  CHECK(std::isfinite(rep.column("loglik")[0]));
}

TEST_CASE("identical seeds give bitwise-identical traces") {
  Dataset ds = recovery_data(3);
  RunConfig cfg = recovery_config();
  cfg.iterations = 300;
  RunReport a = run_chain(ds.tensor, ds.design, cfg);
  RunReport b = run_chain(ds.tensor, ds.design, cfg);
  REQUIRE(a.columns == b.columns);
  for (size_t c = 0; c < a.trace.size(); ++c)
    CHECK(std::memcmp(a.trace[c].data(), b.trace[c].data(),
                      a.trace[c].size() * sizeof(double)) == 0);

  cfg.seed = 999;
  RunReport other = run_chain(ds.tensor, ds.design, cfg);
  CHECK(std::memcmp(a.column("ell_1").data(), other.column("ell_1").data(),
                    a.column("ell_1").size() * sizeof(double)) != 0);
}

TEST_CASE("truncated-normal draws stay positive") {
  CounterRng rng(71);
  for (int i = 0; i < 100000; ++i) CHECK(rng.next_truncated_normal_pos(0.05, 1.0) > 0.0);
}

TEST_CASE("flat target with symmetric proposals accepts almost everything") {
  Dataset ds = recovery_data(4);
  RunConfig cfg = recovery_config();
  cfg.iterations = 2000;
  cfg.flat_likelihood = true;
  cfg.ell0 = {50.0};  // far from zero so positivity rejections cannot bite
  cfg.ell_prior_sd_scale = 1e6;
  cfg.v_ell = {0.01};
  RunReport rep = run_chain(ds.tensor, ds.design, cfg);
  CHECK(rep.acceptance.at("ell") > 0.95);
}

TEST_CASE("flat likelihood recovers the Gaussian prior on ell") {
  Dataset ds = recovery_data(5);
  RunConfig cfg = recovery_config();
  cfg.iterations = 60000;
  cfg.flat_likelihood = true;
  cfg.ell0 = {30.0};
  cfg.ell_prior_sd_scale = 0.1;  // prior sd = 3, well clear of the positivity wall
  cfg.v_ell = {9.0};
  RunReport rep = run_chain(ds.tensor, ds.design, cfg);
  const auto& full = rep.column("ell_1");
  std::vector<double> thinned;
  for (size_t i = full.size() / 2; i < full.size(); i += 6) thinned.push_back(full[i]);
  const double d =
      oracle::ks_statistic(thinned, [](double x) { return norm_cdf((x - 30.0) / 3.0); });
  CHECK(d < oracle::ks_critical(thinned.size()));
}

TEST_CASE("rejected sweeps leave the state bitwise intact") {
  Dataset ds = recovery_data(6);
  RunConfig cfg = recovery_config();
  cfg.flat_likelihood = true;
  cfg.ell0 = {1.0};
  cfg.ell_prior_gaussian = true;
  cfg.ell_prior_sd_scale = 1e-9;  // any move is crushed by the prior
  cfg.v_ell = {100.0};
  Sampler s(ds.tensor, ds.design, cfg);
  const double before = s.state().ell[0];
  int rejected = 0;
  for (int i = 0; i < 200; ++i) {
    s.step();
    if (!s.last_accept_ell()) {
      ++rejected;
      CHECK(std::memcmp(&s.state().ell[0], &before, sizeof(double)) == 0);
    }
  }
  CHECK(rejected > 150);
}

TEST_CASE("sigma block keeps its constraints under wild proposals") {
  SynthOptions opt;
  opt.dims = {2, 3, 16};
  opt.d = 1;
  opt.q = {2.0};
  opt.seed = 7;
  Dataset ds = synth_dataset(opt);

  RunConfig cfg;
  cfg.iterations = 1500;
  cfg.v_ell = {0.01};
  cfg.ell0 = {0.5};
  cfg.v_sigma = 4.0;  // sd 2: proposals frequently invalid, must auto-reject
  RunReport rep = run_chain(ds.tensor, ds.design, cfg);
  for (double v : rep.column("sigma11")) CHECK(v > 0.0);
  for (double v : rep.column("sigma22")) CHECK(v > 0.0);
  for (double v : rep.column("rho")) {
    CHECK(v > -1.0);
    CHECK(v < 1.0);
  }
  CHECK(rep.acceptance.at("sigma") < 1.0);
}

TEST_CASE("nested warm-up reproduces the nonnested length-scale path") {
  Dataset ds = recovery_data(8);
  RunConfig cfg = recovery_config();
  cfg.iterations = 400;
  RunReport plain = run_chain(ds.tensor, ds.design, cfg);

  cfg.flavour = ModelFlavour::Nested;
  cfg.t0 = 1000;  // never reached: the whole run is warm-up
  RunReport warm = run_chain(ds.tensor, ds.design, cfg);

  const auto& a = plain.column("ell_1");
  const auto& b = warm.column("ell_1");
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  for (double v : warm.column("a_1")) CHECK(v == 1.0);      // hyper untouched in warm-up
  for (double v : warm.column("delta_1")) CHECK(v == 1.0);
}

TEST_CASE("hyper block starts exactly at t0 and a rejected block retains values") {
  Dataset ds = recovery_data(9);
  RunConfig cfg = recovery_config();
  cfg.flavour = ModelFlavour::Nested;
  cfg.iterations = 60;
  cfg.t0 = 20;
  cfg.a0 = {0.003};
  cfg.delta0 = {1.0};
  // delta proposals impossible to accept: prior glued to the seed
  cfg.delta_prior = {true, 1.0, 1e-12};
  cfg.v_delta = {1.0};
  RunReport rep = run_chain(ds.tensor, ds.design, cfg);
  const auto& a_tr = rep.column("a_1");
  const auto& d_tr = rep.column("delta_1");
  for (int t = 0; t < 60; ++t) {
    CHECK(d_tr[t] == 1.0);      // rejected block keeps delta at its current value
    CHECK(a_tr[t] == 0.003);    // and the amplitude too
  }
  CHECK(rep.acceptance.at("hyper") == 0.0);
}

TEST_CASE("nested hyper parameters move once the lookback window fills") {
  Dataset ds = recovery_data(10);
  RunConfig cfg = recovery_config();
  cfg.flavour = ModelFlavour::Nested;
  cfg.iterations = 300;
  cfg.t0 = 50;
  cfg.a0 = {0.003};
  RunReport rep = run_chain(ds.tensor, ds.design, cfg);
  const auto& a_tr = rep.column("a_1");
  for (int t = 0; t < 49; ++t) CHECK(a_tr[t] == 0.003);
  bool moved = false;
  for (int t = 49; t < 300; ++t) moved = moved || a_tr[t] != 0.003;
  CHECK(moved);
  for (double v : a_tr) CHECK(v > 0.0);  // truncation invariant on the whole trace
}

TEST_CASE("synthetic recovery: the length-scale HPD covers the truth") {
  // k=2 data at known ell* = 0.25; one chain per seed, then coverage counting.
  int hits = 0;
  const int runs = 20;
  for (int r = 0; r < runs; ++r) {
    Dataset ds = recovery_data(100 + r);
    RunConfig cfg = recovery_config();
    cfg.iterations = 5000;
    cfg.seed = 1000 + r;
    RunReport rep = run_chain(ds.tensor, ds.design, cfg);
    auto s = summarize(rep, 0.5);
    const ParamSummary* ell = s.find("ell_1");
    REQUIRE(ell != nullptr);
    if (ell->hpd95.lo <= 0.25 && 0.25 <= ell->hpd95.hi) ++hits;
  }
  CHECK(hits >= 18);
}

TEST_CASE("log-likelihood trace is non-degenerate and stationary") {
  Dataset ds = recovery_data(11);
  RunConfig cfg = recovery_config();
  cfg.iterations = 5000;
  RunReport rep = run_chain(ds.tensor, ds.design, cfg);
  const auto& ll = rep.column("loglik");
  std::vector<double> half(ll.begin() + ll.size() / 2, ll.end());
  double mn = half[0], mx = half[0];
  for (double v : half) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  CHECK(mx > mn);  // trace actually moves
  CHECK(std::abs(geweke_z(half)) < 4.0);
}

TEST_CASE("nested and nonnested posteriors agree on stationary data") {
  Dataset ds = recovery_data(12);
  RunConfig cfg = recovery_config();
  cfg.iterations = 5000;
  RunReport plain = run_chain(ds.tensor, ds.design, cfg);

  cfg.flavour = ModelFlavour::Nested;
  cfg.t0 = 100;
  cfg.a0 = {0.0025};
  cfg.delta0 = {1.0};
  RunReport nested = run_chain(ds.tensor, ds.design, cfg);

  auto sp = summarize(plain, 0.5);
  auto sn = summarize(nested, 0.5);
  CHECK(overlaps(sp.find("ell_1")->hpd95, sn.find("ell_1")->hpd95));
}

TEST_CASE("invalid configurations fail before iteration zero") {
  SynthOptions opt;
  opt.dims = {3, 16};
  opt.d = 1;
  opt.q = {4.0};
  opt.seed = 13;
  Dataset ds = synth_dataset(opt);
  RunConfig cfg = recovery_config();
  cfg.direct_mode = 1;  // mode 0 has size 3: not a (sigma11, sigma22, rho) mode
  CHECK_THROWS_AS(run_chain(ds.tensor, ds.design, cfg), validation_error);

  RunConfig cfg2 = recovery_config();
  cfg2.kernel_mode = 7;
  CHECK_THROWS_AS(run_chain(ds.tensor, ds.design, cfg2), validation_error);

  RunConfig cfg3 = recovery_config();
  cfg3.ell0 = {1.0, 2.0, 3.0};  // three axes for a 1-d design
  CHECK_THROWS_AS(run_chain(ds.tensor, ds.design, cfg3), validation_error);
}

TEST_CASE("trace csv carries the full schema with empty absent fields") {
  SynthOptions opt;
  opt.dims = {2, 3, 9};
  opt.d = 2;
  opt.q = {1.0, 1.0};
  opt.seed = 14;
  Dataset ds = synth_dataset(opt);
  RunConfig cfg;
  cfg.iterations = 5;
  cfg.v_ell = {0.01};
  RunReport rep = run_chain(ds.tensor, ds.design, cfg);
  write_trace_csv(rep, "trace_schema.csv");
  std::ifstream f("trace_schema.csv");
  std::string comment, header, row;
  std::getline(f, comment);
  std::getline(f, header);
  std::getline(f, row);
  CHECK(header ==
        "iter,loglik,q_1,q_2,ell_1,ell_2,a_1,a_2,delta_1,delta_2,sigma11,sigma22,rho,"
        "s1_test,s2_test,accept_block1,accept_block2");
  CHECK(comment.rfind("# seed=", 0) == 0);
  CHECK(comment.find("config_hash=") != std::string::npos);
  // nonnested run: a, delta and s columns stay empty
  auto cells = split(row, ',');
  REQUIRE(cells.size() == 17);
  CHECK(cells[0] == "1");
  CHECK(cells[6].empty());   // a_1
  CHECK(cells[9].empty());   // delta_2
  CHECK(cells[13].empty());  // s1_test
  CHECK(!cells[15].empty()); // accept_block1
  std::remove("trace_schema.csv");
}

}  // TEST_SUITE
