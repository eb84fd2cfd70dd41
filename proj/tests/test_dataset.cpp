#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>

#include "core/dataset.hpp"
#include "core/run_config.hpp"
#include "core/synth.hpp"
#include "test_support.hpp"

using namespace tgp;

namespace {

Dataset small_dataset(uint64_t seed) {
  CounterRng rng(seed);
  Dataset ds;
  ds.tensor = TensorK({2, 3, 4});
  for (size_t i = 0; i < ds.tensor.size(); ++i) ds.tensor[i] = rng.next_normal() * 1e3;
  ds.design = Matrix(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 2; ++c) ds.design(i, c) = rng.next_normal();
  ds.meta["origin"] = "unit-test";
  return ds;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("csv round-trip preserves values and meta") {
  Dataset ds = small_dataset(71);
  write_dataset(ds, "rt_test.csv");
  Dataset back = read_dataset("rt_test.csv");
  REQUIRE(back.tensor.dims() == ds.tensor.dims());
  for (size_t i = 0; i < ds.tensor.size(); ++i) CHECK(back.tensor[i] == ds.tensor[i]);
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 2; ++c) CHECK(back.design(i, c) == ds.design(i, c));
  CHECK(back.meta.at("origin") == "unit-test");
  std::remove("rt_test.csv");
}

TEST_CASE("binary round-trip is bit-identical") {
  Dataset ds = small_dataset(72);
  write_dataset(ds, "rt_test.bin");
  Dataset back = read_dataset("rt_test.bin");
  REQUIRE(back.tensor.size() == ds.tensor.size());
  CHECK(std::memcmp(back.tensor.data().data(), ds.tensor.data().data(),
                    ds.tensor.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(back.design.data().data(), ds.design.data().data(),
                    ds.design.data().size() * sizeof(double)) == 0);
  std::remove("rt_test.bin");
}

TEST_CASE("missing design-point table is named in the error") {
  {
    std::ofstream f("bad_ds.csv");
    f << "dims,2,2\ndesign_dim,1\ndata\n1\n2\n3\n4\n";
  }
  CHECK_THROWS_WITH_AS(read_dataset("bad_ds.csv"), doctest::Contains("design_points"),
                       validation_error);
  std::remove("bad_ds.csv");
}

TEST_CASE("declared dims must match the body length") {
  {
    std::ofstream f("bad_len.csv");
    f << "dims,2,2\ndesign_dim,1\ndesign_points\n0\n1\ndata\n1\n2\n3\n";
  }
  CHECK_THROWS_AS(read_dataset("bad_len.csv"), validation_error);
  std::remove("bad_len.csv");
}

TEST_CASE("split_last_slice separates the test sheet") {
  Dataset ds = small_dataset(73);
  Dataset train, test;
  split_last_slice(ds, train, test);
  CHECK(train.tensor.dims() == std::vector<int>({2, 3, 3}));
  CHECK(test.tensor.dims() == std::vector<int>({2, 3, 1}));
  CHECK(train.design.rows() == 3);
  CHECK(test.design.rows() == 1);
  CHECK(std::isnan(test.design(0, 0)));
  const TensorK last = get_slice(ds.tensor, {2, 3});
  for (size_t i = 0; i < last.size(); ++i) CHECK(test.tensor[i] == last[i]);
}

TEST_CASE("config serialisation round-trips losslessly") {
  RunConfig cfg;
  cfg.flavour = ModelFlavour::Nested;
  cfg.iterations = 4321;
  cfg.seed = 99;
  cfg.t0 = 50;
  cfg.ell0 = {0.5, 2.0};
  cfg.v_ell = {0.125};
  cfg.a_prior = {true, 1.0, 0.5};
  cfg.s_lo = {1.7, 0.0};
  cfg.s_hi = {2.3, 1.5707963267948966};
  const std::string text = serialize_config(cfg);
  RunConfig back = parse_config_text(text);
  CHECK(serialize_config(back) == text);
  CHECK(config_hash(back) == config_hash(cfg));
}

TEST_CASE("unknown keys and sections fail fast") {
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\nmodle = nested\n"),
                       doctest::Contains("unknown key"), validation_error);
  CHECK_THROWS_WITH_AS(parse_config_text("[nope]\nx = 1\n"), doctest::Contains("unknown section"),
                       validation_error);
  CHECK_THROWS_AS(parse_config_text("x = 1\n"), validation_error);  // key outside a section
}

TEST_CASE("config_set applies dotted overrides") {
  RunConfig cfg;
  config_set(cfg, "run.model", "nested");
  config_set(cfg, "run.t0", "200");
  config_set(cfg, "predict.bounds", "1.7:2.3,0:1.5708");
  CHECK(cfg.flavour == ModelFlavour::Nested);
  CHECK(cfg.t0 == 200);
  CHECK(cfg.s_hi[1] == doctest::Approx(1.5708));
  CHECK_THROWS_AS(config_set(cfg, "run.bogus", "1"), validation_error);
}

TEST_CASE("validation rejects broken settings") {
  RunConfig cfg;
  cfg.iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), validation_error);
  cfg = RunConfig{};
  cfg.burnin_frac = 1.0;
  CHECK_THROWS_AS(cfg.validate(), validation_error);
  cfg = RunConfig{};
  cfg.rho_0 = 1.5;
  CHECK_THROWS_AS(cfg.validate(), validation_error);
}

TEST_CASE("synth embeds generator settings and honours dims") {
  SynthOptions opt;
  opt.dims = {2, 3, 4};
  opt.d = 1;
  opt.q = {2.0};
  opt.seed = 5;
  Dataset ds = synth_dataset(opt);
  CHECK(ds.tensor.dims() == std::vector<int>({2, 3, 4}));
  CHECK(ds.design.rows() == 4);
  CHECK(ds.meta.at("synth_q") == "2");
  CHECK(ds.meta.at("synth_seed") == "5");

  // same seed, same bytes
  Dataset again = synth_dataset(opt);
  CHECK(std::memcmp(again.tensor.data().data(), ds.tensor.data().data(),
                    ds.tensor.size() * sizeof(double)) == 0);
}

TEST_CASE("planted point appends one slice at the given design point") {
  SynthOptions opt;
  opt.dims = {2, 3, 4};
  opt.d = 2;
  opt.q = {1.0, 1.0};
  opt.has_plant = true;
  opt.plant = {2.05, 0.7};
  Dataset ds = synth_dataset(opt);
  CHECK(ds.tensor.dim(2) == 5);
  CHECK(ds.design.rows() == 5);
  CHECK(ds.design(4, 0) == 2.05);
  CHECK(ds.design(4, 1) == 0.7);
}

TEST_CASE("two-regime construction shows the regime flip in empirical correlations") {
  SynthOptions opt;
  opt.dims = {2, 40, 16};
  opt.d = 1;
  opt.q = {std::log(2.0)};  // neighbour correlation 1/2 at unit spacing
  opt.spacing = {1.0};
  opt.seed = 9;
  opt.two_regime = true;
  opt.regime_q_factor = 16.0;
  opt.sigma11 = 1.0;
  opt.sigma22 = 1.0;
  opt.rho = 0.0;
  opt.ar1 = 0.0;  // slice entries i.i.d., so entrywise correlation estimates Sigma_3
  Dataset ds = synth_dataset(opt);

  const double median = std::stod(ds.meta.at("synth_regime_split"));
  auto slice_of = [&](int p) { return get_slice(ds.tensor, {2, p}); };
  auto corr = [&](int p, int q) {
    std::vector<double> a = slice_of(p).data(), b = slice_of(q).data();
    return oracle::pearson(a, b);
  };
  double lower_sum = 0.0, upper_sum = 0.0, cross_sum = 0.0;
  int lower_n = 0, upper_n = 0, cross_n = 0;
  for (int p = 0; p + 1 < 16; ++p) {
    const bool ra = ds.design(p, 0) > median;
    const bool rb = ds.design(p + 1, 0) > median;
    const double c = corr(p, p + 1);
    if (!ra && !rb) {
      lower_sum += c;
      ++lower_n;
    } else if (ra && rb) {
      upper_sum += c;
      ++upper_n;
    } else {
      cross_sum += c;
      ++cross_n;
    }
  }
  REQUIRE(lower_n > 0);
  REQUIRE(upper_n > 0);
  REQUIRE(cross_n > 0);
  CHECK(lower_sum / lower_n > 0.3);              // smooth regime: neighbours correlate ~0.5
  CHECK(std::abs(upper_sum / upper_n) < 0.15);   // sharp regime: correlation collapsed
  CHECK(std::abs(cross_sum / cross_n) < 0.15);   // regimes decorrelated
}

}  // TEST_SUITE
