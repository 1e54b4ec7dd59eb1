#include "yiarq/harness.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "yiarq/bounds.hpp"

using namespace yiarq;
using harness::ExperimentConfig;
using harness::FlagSpec;

namespace {

ExperimentConfig smoke_config() {
  ExperimentConfig cfg;
  cfg.code = convcode::CodeSpec::from_octal("5,7");
  cfg.H = 40;
  cfg.ebno_db = {-2.0};
  cfg.gammas = {5.0};
  cfg.sigma2s = {0.5};
  cfg.flags = {FlagSpec::parse("0"), FlagSpec::parse("0.5u0")};
  cfg.trials = 1500;
  cfg.seed = 42;
  return cfg;
}

std::string csv_string(const ExperimentConfig& cfg,
                       const std::vector<harness::SweepRow>& rows) {
  std::ostringstream out;
  harness::write_csv(out, cfg, rows);
  return out.str();
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("wilson interval matches reference values") {
  // mpmath evaluations of the score interval at z = 1.959963984540054
  const auto mid = harness::estimate(50, 100);
  CHECK(mid.p_hat == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mid.ci_low == doctest::Approx(0.40383153036599564).epsilon(1e-13));
  CHECK(mid.ci_high == doctest::Approx(0.59616846963400436).epsilon(1e-13));
  // commonly quoted as a +/-0.098 interval at n=100
  CHECK(std::abs((mid.ci_high - mid.ci_low) - 0.196) < 0.004);

  const auto low = harness::estimate(1, 10);
  CHECK(low.ci_low == doctest::Approx(0.017876213095072907).epsilon(1e-12));
  CHECK(low.ci_high == doctest::Approx(0.40415002679523846).epsilon(1e-12));

  const auto high = harness::estimate(999, 1000);
  CHECK(high.ci_low == doctest::Approx(0.99435744140204207).epsilon(1e-13));
  CHECK(high.ci_high == doctest::Approx(0.99982345362937392).epsilon(1e-13));
}

TEST_CASE("wilson interval endpoints are exact at k=0 and k=n") {
  const auto zero = harness::estimate(0, 100);
  CHECK(zero.p_hat == 0.0);
  CHECK(zero.ci_low == 0.0);
  CHECK(zero.ci_high ==
        doctest::Approx(0.036993498206985676).epsilon(1e-13));

  const auto full = harness::estimate(100, 100);
  CHECK(full.p_hat == 1.0);
  CHECK(full.ci_high == 1.0);
  CHECK(full.ci_low == doctest::Approx(0.96300650179301432).epsilon(1e-13));

  for (std::uint64_t k : {0ull, 3ull, 57ull, 100ull}) {
    const auto e = harness::estimate(k, 100);
    CHECK(e.ci_low >= 0.0);
    CHECK(e.ci_low <= e.p_hat);
    CHECK(e.p_hat <= e.ci_high);
    CHECK(e.ci_high <= 1.0);
  }
  CHECK_THROWS_AS(harness::estimate(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(harness::estimate(5, 4), std::invalid_argument);
}

TEST_CASE("flag tokens parse in absolute and relative form") {
  const auto abs = FlagSpec::parse("0.4");
  CHECK_FALSE(abs.relative);
  CHECK(abs.value == doctest::Approx(0.4));
  CHECK(abs.resolve(2.0, 5) == doctest::Approx(0.4));
  CHECK(abs.str() == "0.4");

  const auto rel = FlagSpec::parse("0.9u0");
  CHECK(rel.relative);
  CHECK(rel.value == doctest::Approx(0.9));
  // 0.9 * d_f * sqrt(2 Ec/N0)
  CHECK(rel.resolve(2.0, 5) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(rel.str() == "0.9u0");

  const auto unit = FlagSpec::parse("u0");
  CHECK(unit.relative);
  CHECK(unit.value == doctest::Approx(1.0));

  CHECK_THROWS_AS(FlagSpec::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(FlagSpec::parse("-1"), std::invalid_argument);
  CHECK_THROWS_AS(FlagSpec::parse("0.9u1"), std::invalid_argument);
  CHECK_THROWS_AS(FlagSpec::parse(""), std::invalid_argument);
}

TEST_CASE("grids parse ranges and lists") {
  CHECK(harness::parse_grid("5") == std::vector<double>{5.0});
  CHECK(harness::parse_grid("1,2,3.5") ==
        std::vector<double>{1.0, 2.0, 3.5});
  const auto r = harness::parse_grid("0:2:14");
  REQUIRE(r.size() == 8);
  CHECK(r.front() == 0.0);
  CHECK(r.back() == 14.0);
  CHECK(harness::parse_grid("0:1:25").size() == 26);
  CHECK(harness::parse_grid("0:0.5:2") ==
        std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK(harness::parse_grid("0:2:4,10") ==
        std::vector<double>{0.0, 2.0, 4.0, 10.0});
  CHECK(harness::parse_grid("-4:2:0") == std::vector<double>{-4.0, -2.0, 0.0});

  CHECK_THROWS_AS(harness::parse_grid(""), std::invalid_argument);
  CHECK_THROWS_AS(harness::parse_grid("1,,2"), std::invalid_argument);
  CHECK_THROWS_AS(harness::parse_grid("1::2"), std::invalid_argument);
  CHECK_THROWS_AS(harness::parse_grid("0:-1:5"), std::invalid_argument);
  CHECK_THROWS_AS(harness::parse_grid("0:x:5"), std::invalid_argument);
}

TEST_CASE("config validation") {
  auto cfg = smoke_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.H = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = smoke_config();
  cfg.flags.clear();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = smoke_config();
  cfg.sigma2s = {0.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = smoke_config();
  cfg.threads = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = smoke_config();
  cfg.stop_events = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(harness::format_double(0.5) == "0.5");
  CHECK(harness::format_double(0.0) == "0");
  CHECK(harness::format_double(-2.0) == "-2");
  CHECK(harness::format_double(std::nan("")) == "nan");
  CHECK(harness::format_double(INFINITY) == "inf");
  channel::RandomStream rng(123, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = (rng.uniform() - 0.5) *
                     std::pow(10.0, 40.0 * (rng.uniform() - 0.5));
    CHECK(std::stod(harness::format_double(x)) == x);
  }
}

TEST_CASE("bound-only point carries bounds but no estimates") {
  auto cfg = smoke_config();
  cfg.trials = 0;
  cfg.ebno_db = {8.0};
  const auto rows = harness::run_point(cfg, {8.0, 5.0, 0.5}, 0);
  REQUIRE(rows.size() == 2);
  const auto& r0 = rows[0];
  CHECK(r0.u == 0.0);
  CHECK_FALSE(r0.pb_mc.has_value());
  CHECK_FALSE(r0.px_mc.has_value());
  CHECK_FALSE(r0.pb_all_mc.has_value());
  CHECK(r0.trials == 0);
  REQUIRE(r0.pb_bound.has_value());
  REQUIRE(r0.pe_bound.has_value());
  REQUIRE(r0.px_bound.has_value());

  // the emitted bound must equal a standalone evaluation at the same cell
  const double ecn0 = channel::ebno_to_ecno(std::pow(10.0, 0.8), cfg.H,
                                            cfg.code.m, cfg.code.rate());
  const auto p = bounds::BoundParams::from_gamma(ecn0, 0.0, 5, 5.0, 0.5);
  const auto tc = convcode::compute_transfer_coefficients(
      convcode::build_trellis(cfg.code), cfg.code.n_c * (cfg.H + cfg.code.m));
  const auto report = bounds::union_bounds(tc, p, cfg.H, cfg.code.m, 2);
  CHECK(*r0.pb_bound == doctest::Approx(report.pb).epsilon(1e-12));
  CHECK(*r0.pe_bound == doctest::Approx(report.pe).epsilon(1e-12));

  // relative flag resolved against this cell's Ec/N0
  CHECK(rows[1].u ==
        doctest::Approx(0.5 * 5.0 * std::sqrt(2.0 * ecn0)).epsilon(1e-12));
}

TEST_CASE("simulated point produces coherent paired estimates") {
  const auto cfg = smoke_config();
  const auto rows = harness::run_point(cfg, {-2.0, 5.0, 0.5}, 0);
  REQUIRE(rows.size() == 2);
  const auto& at0 = rows[0];
  const auto& athalf = rows[1];

  REQUIRE(at0.pb_mc.has_value());
  REQUIRE(at0.px_mc.has_value());
  REQUIRE(at0.pb_all_mc.has_value());
  CHECK(at0.trials == 1500);

  // u=0 never rejects, so accepted-frame and all-frame views coincide
  CHECK(at0.px_mc->k == 0);
  CHECK(at0.px_mc->p_hat == 0.0);
  CHECK(at0.pb_mc->k == at0.pb_all_mc->k);
  CHECK(at0.pb_mc->n == at0.pb_all_mc->n);
  CHECK(at0.pb_mc->n == 1500ull * 40ull);
  // at this snr bit errors are plentiful
  CHECK(at0.pb_mc->k > 0);

  // rejections appear at the larger flag and only shrink the accepted pool
  REQUIRE(athalf.px_mc.has_value());
  CHECK(athalf.px_mc->k > at0.px_mc->k);
  REQUIRE(athalf.pb_mc.has_value());
  CHECK(athalf.pb_mc->n ==
        (athalf.trials - athalf.px_mc->k) * 40ull);
  // undetected errors never exceed the all-frames count
  CHECK(athalf.pb_mc->k <= at0.pb_all_mc->k);
  // the union bound dominates the point estimate
  CHECK(at0.pb_mc->ci_low <= *at0.pb_bound);
}

TEST_CASE("an unreachable flag rejects every frame") {
  auto cfg = smoke_config();
  cfg.flags = {FlagSpec::parse("1e9")};
  cfg.trials = 50;
  const auto rows = harness::run_point(cfg, {-2.0, 5.0, 0.5}, 0);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].px_mc->k == 50);
  CHECK(rows[0].px_mc->p_hat == 1.0);
  CHECK_FALSE(rows[0].pb_mc.has_value());

  std::ostringstream out;
  harness::write_csv(out, cfg, rows);
  CHECK(out.str().find("nan,nan,nan,0,0") != std::string::npos);
}

TEST_CASE("results are identical across worker counts") {
  auto cfg = smoke_config();
  cfg.trials = 800;
  const auto base = harness::run_sweep(cfg);
  for (int threads : {2, 4, 7}) {
    CAPTURE(threads);
    auto par = cfg;
    par.threads = threads;
    const auto rows = harness::run_sweep(par);
    CHECK(csv_string(par, rows) == csv_string(cfg, base));
  }
}

TEST_CASE("different seeds change the counts") {
  auto cfg = smoke_config();
  cfg.trials = 400;
  const auto a = harness::run_point(cfg, {-2.0, 5.0, 0.5}, 0);
  cfg.seed = 43;
  const auto b = harness::run_point(cfg, {-2.0, 5.0, 0.5}, 0);
  CHECK(a[0].pb_mc->k != b[0].pb_mc->k);
}

TEST_CASE("stop_events halts at a chunk boundary once events accumulate") {
  auto cfg = smoke_config();
  cfg.trials = 100000;
  cfg.stop_events = 30;
  const auto rows = harness::run_point(cfg, {-2.0, 5.0, 0.5}, 0);
  REQUIRE(rows.size() == 2);
  // at this snr the very first 4096-trial chunk collects 30 bit errors
  CHECK(rows[0].trials == 4096);
  CHECK(rows[0].pb_all_mc->k >= 30);

  auto par = cfg;
  par.threads = 4;
  const auto par_rows = harness::run_point(par, {-2.0, 5.0, 0.5}, 0);
  CHECK(csv_string(par, par_rows) == csv_string(cfg, rows));

  // an unreachably large target falls back to the trial cap
  auto capped = smoke_config();
  capped.trials = 300;
  capped.stop_events = 1000000000ull;
  CHECK(harness::run_point(capped, {-2.0, 5.0, 0.5}, 0)[0].trials == 300);
}

TEST_CASE("sweep row order follows the nested grids") {
  auto cfg = smoke_config();
  cfg.trials = 0;
  cfg.ebno_db = {0.0, 10.0};
  cfg.gammas = {0.0, 5.0};
  cfg.sigma2s = {0.5};
  cfg.flags = {FlagSpec::parse("0"), FlagSpec::parse("0.5u0"),
               FlagSpec::parse("0.9u0")};
  const auto rows = harness::run_sweep(cfg);
  REQUIRE(rows.size() == 2 * 2 * 1 * 3);
  CHECK(rows[0].ebno_db == 0.0);
  CHECK(rows[0].gamma == 0.0);
  CHECK(rows[3].gamma == 5.0);
  CHECK(rows[6].ebno_db == 10.0);
  // u tokens resolve per cell, so the same relative flag grows with Eb/N0
  CHECK(rows[7].u > rows[1].u);
  for (std::size_t i = 0; i < rows.size(); i += 3) {
    CHECK(rows[i].u == 0.0);
    CHECK(rows[i + 1].u < rows[i + 2].u);
  }
}

TEST_CASE("csv layout carries metadata, header and one line per row") {
  auto cfg = smoke_config();
  cfg.trials = 0;
  cfg.ebno_db = {8.0};
  const auto rows = harness::run_sweep(cfg);
  const std::string text = csv_string(cfg, rows);

  CHECK(text.find("# yiarq sweep v0.1.0\n") == 0);
  CHECK(text.find("# code: 5,7\n") != std::string::npos);
  CHECK(text.find("# m: 2\n") != std::string::npos);
  CHECK(text.find("# H: 40\n") != std::string::npos);
  CHECK(text.find("# fading: iid\n") != std::string::npos);
  CHECK(text.find("# u: 0,0.5u0\n") != std::string::npos);
  CHECK(text.find("# seed: 42\n") != std::string::npos);
  CHECK(text.find("# rng: philox4x32-10\n") != std::string::npos);
  CHECK(text.find(
            "ebno_db,gamma,sigma2,u,"
            "pb_mc,pb_mc_ci_low,pb_mc_ci_high,pb_mc_k,pb_mc_n,"
            "px_mc,px_mc_ci_low,px_mc_ci_high,px_mc_k,px_mc_n,"
            "pb_all_mc,pb_all_mc_ci_low,pb_all_mc_ci_high,pb_all_mc_k,"
            "pb_all_mc_n,"
            "pe_bound,pb_bound,px_bound,trials,seed,rng_algorithm_id\n") !=
        std::string::npos);

  std::istringstream in(text);
  std::string line;
  std::size_t meta = 0, data = 0;
  while (std::getline(in, line)) {
    if (line.rfind('#', 0) == 0) {
      ++meta;
    } else {
      ++data;
      std::size_t commas = 0;
      for (char ch : line) commas += ch == ',';
      CHECK(commas == 24);
    }
  }
  CHECK(meta >= 8);
  CHECK(data == rows.size() + 1);  // header + rows
  CHECK(text.find(",42,philox4x32-10\n") != std::string::npos);
}

TEST_CASE("sweep writes through to a file and rejects bad paths") {
  auto cfg = smoke_config();
  cfg.trials = 0;
  const std::string path = "/tmp/yiarq_test_sweep.csv";
  harness::run_sweep_to_file(cfg, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string first;
  std::getline(in, first);
  CHECK(first == "# yiarq sweep v0.1.0");

  CHECK_THROWS_AS(
      harness::run_sweep_to_file(cfg, "/nonexistent-dir/sweep.csv"),
      std::runtime_error);
}

}  // TEST_SUITE
