#include "mrl/error.hpp"
#include "mrl/simulation.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

using namespace mrl;

namespace {

SimulationConfig
small_config(const TrueDistribution& d, std::size_t n, std::size_t reps)
{
  SimulationConfig c;
  c.distribution = d;
  c.n = n;
  c.reps = reps;
  c.estimators = default_templates();
  c.seed = 42;
  c.threads = 1;
  return c;
}

CurveEstimate
curve_from(const std::vector<double>& grid, const std::function<double(double)>& m)
{
  CurveEstimate c;
  c.grid = grid;
  for (double t : grid) {
    c.mrl.push_back(m(t));
    c.survival.push_back(1.0);
    c.cum_survival.push_back(m(t));
    c.flags.push_back(PointFlag::ok);
  }
  return c;
}

bool
same_bits(double a, double b)
{
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

} // namespace

TEST_CASE("sampling is reproducible and stays inside the support")
{
  const auto u = TrueDistribution::uniform(0.0, 1.0);
  std::mt19937_64 r1(substream_seed(9, 0)), r2(substream_seed(9, 0));
  const Sample a = sample_distribution(u, 5, r1);
  const Sample b = sample_distribution(u, 5, r2);
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end()));
  CHECK(substream_seed(9, 0) != substream_seed(9, 1));
  CHECK(substream_seed(9, 0) != substream_seed(10, 0));

  for (const auto& d : {TrueDistribution::absnormal(), TrueDistribution::beta(3.0, 2.0),
                        TrueDistribution::uniform(0.0, 1.0), TrueDistribution::weibull(3.0, 2.0)}) {
    std::mt19937_64 rng(1);
    const Sample s = sample_distribution(d, 5000, rng);
    for (double x : s.values())
      CHECK(d.support().interior(x));
  }

  std::mt19937_64 rng(2);
  const std::size_t n = 100000;
  const Sample s = sample_distribution(TrueDistribution::exponential(1.0), n, rng);
  CHECK(std::abs(s.mean() - 1.0) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK_THROWS_AS(sample_distribution(u, 0, rng), Error);
}

TEST_CASE("sample moments match the parameterisation")
{
  struct Case
  {
    TrueDistribution d;
    double mean;
    double var;
  };
  const double pi = std::numbers::pi;
  const std::vector<Case> cases{
    {TrueDistribution::gamma(2.0, 3.0), 6.0, 18.0},
    {TrueDistribution::beta(3.0, 2.0), 0.6, 0.04},
    {TrueDistribution::weibull(3.0, 2.0), 2.0 * std::tgamma(1.0 + 1.0 / 3.0),
     4.0 * (std::tgamma(1.0 + 2.0 / 3.0) - std::pow(std::tgamma(1.0 + 1.0 / 3.0), 2))},
    {TrueDistribution::absnormal(), std::sqrt(2.0 / pi), 1.0 - 2.0 / pi},
    {TrueDistribution::exponential(0.5), 2.0, 4.0},
  };
  for (const auto& c : cases) {
    CHECK(c.d.mean() == doctest::Approx(c.mean).epsilon(1e-12));
    CHECK(c.d.variance() == doctest::Approx(c.var).epsilon(1e-12));
    std::mt19937_64 rng(3);
    const Sample s = sample_distribution(c.d, 40000, rng);
    CHECK(std::abs(s.mean() - c.mean) < 4.0 * std::sqrt(c.var / 40000.0));
  }
}

TEST_CASE("integrated squared error")
{
  const auto d = TrueDistribution::exponential(1.0);
  const auto grid = linear_grid(0.01, 5.0, 200);
  CHECK(ise(curve_from(grid, [&](double t) { return d.mrl(t); }), d, 0.01, 5.0) == 0.0);
  CHECK(ise(curve_from(grid, [](double) { return 0.0; }), d, 0.01, 5.0) ==
        doctest::Approx(4.99).epsilon(1e-12));
  // Only grid points inside the range take part.
  double first = 0.0, last = 0.0;
  for (double t : grid) {
    if (t < 1.0 || t > 2.0)
      continue;
    first = first == 0.0 ? t : first;
    last = t;
  }
  CHECK(ise(curve_from(grid, [](double) { return 0.0; }), d, 1.0, 2.0) ==
        doctest::Approx(last - first).epsilon(1e-12));

  auto wiggle = [](double t) { return 1.0 + 0.3 * std::sin(2.0 * t) + 0.1 * t; };
  const double coarse = ise(curve_from(grid, wiggle), d, 0.01, 5.0);
  const double fine = ise(curve_from(linear_grid(0.01, 5.0, 399), wiggle), d, 0.01, 5.0);
  const double ref = oracle::simpson(
    [&](double t) { return (wiggle(t) - 1.0) * (wiggle(t) - 1.0); }, 0.01, 5.0, 20000);
  CHECK(std::abs(coarse - fine) / fine < 0.01);
  CHECK(fine == doctest::Approx(ref).epsilon(1e-4));
}

TEST_CASE("ISE range and ASE points")
{
  const auto u = TrueDistribution::uniform(0.0, 1.0);
  const auto [lo, hi] = ise_range(u);
  CHECK(lo == doctest::Approx(0.001));
  CHECK(hi == doctest::Approx(0.999));
  const auto g = TrueDistribution::gamma(2.0, 3.0);
  const auto [glo, ghi] = ise_range(g);
  const double far = 6.0 + 3.0 * std::sqrt(18.0);
  CHECK(glo == doctest::Approx(1e-3 * far));
  CHECK(ghi == doctest::Approx(far));
  const auto pts = default_ase_points(g);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0] == doctest::Approx(0.001));
  CHECK(pts[1] == doctest::Approx(6.0));
  CHECK(pts[2] == doctest::Approx(far));
  const auto upts = default_ase_points(u);
  CHECK(upts[2] == doctest::Approx(0.999));
}

TEST_CASE("a single replication reports that replication's errors")
{
  auto c = small_config(TrueDistribution::gamma(2.0, 3.0), 40, 1);
  const auto rep = run_mc(c);
  std::mt19937_64 rng(substream_seed(c.seed, 0));
  const Sample s = sample_distribution(c.distribution, c.n, rng);
  const auto [lo, hi] = ise_range(c.distribution);
  const auto grid = linear_grid(lo, hi, c.grid_points);
  CHECK(rep.range_lo == lo);
  CHECK(rep.range_hi == hi);
  REQUIRE(rep.estimators.size() == 4);
  for (std::size_t e = 0; e < 4; ++e) {
    const auto spec = instantiate(c.estimators[e], s);
    const auto curve = evaluate_curve(spec, s, grid);
    const auto& sum = rep.estimators[e];
    CHECK(sum.label == c.estimators[e].label());
    CHECK(sum.aise.mean == ise(curve, c.distribution, lo, hi));
    CHECK(sum.aise.se == 0.0);
    CHECK(sum.bandwidth.mean == spec.bandwidth);
    for (std::size_t k = 0; k < rep.ase_points.size(); ++k) {
      const double t = rep.ase_points[k];
      const std::vector<double> one{t};
      const double d = evaluate_curve(spec, s, one).mrl[0] - c.distribution.mrl(t);
      CHECK(sum.ase[k].mean == doctest::Approx(d * d).epsilon(1e-14));
    }
  }
}

TEST_CASE("reports are deterministic and independent of the thread count")
{
  auto c = small_config(TrueDistribution::beta(3.0, 2.0), 30, 24);
  const auto a = run_mc(c);
  const auto b = run_mc(c);
  c.threads = 3;
  const auto t = run_mc(c);
  for (std::size_t e = 0; e < a.estimators.size(); ++e) {
    CHECK(a.estimators[e].aise.mean == b.estimators[e].aise.mean);
    CHECK(a.estimators[e].aise.se == b.estimators[e].aise.se);
    CHECK(a.estimators[e].aise.mean == t.estimators[e].aise.mean);
    CHECK(a.estimators[e].aise.se == t.estimators[e].aise.se);
    for (std::size_t r = 0; r < c.reps; ++r)
      CHECK(same_bits(a.estimators[e].ise_by_rep[r], t.estimators[e].ise_by_rep[r]));
    for (std::size_t k = 0; k < a.ase_points.size(); ++k)
      CHECK(a.estimators[e].ase[k].mean == t.estimators[e].ase[k].mean);
    CHECK(std::isfinite(a.estimators[e].aise.mean));
    CHECK(a.estimators[e].aise.mean >= 0.0);
  }
  c.seed = 43;
  CHECK(run_mc(c).estimators[3].aise.mean != a.estimators[3].aise.mean);
}

TEST_CASE("configuration preconditions")
{
  auto c = small_config(TrueDistribution::exponential(1.0), 20, 0);
  CHECK_THROWS_AS(run_mc(c), Error);
  c.reps = 2;
  c.n = 0;
  CHECK_THROWS_AS(run_mc(c), Error);
  c.n = 20;
  c.estimators.clear();
  CHECK_THROWS_AS(run_mc(c), Error);
  c.estimators = default_templates();
  c.range_min = -1.0;
  CHECK_THROWS_AS(run_mc(c), Error);
  c.range_min.reset();
  c.estimators[1].bandwidth = BandwidthPolicy{false, -1.0};
  CHECK_THROWS_AS(run_mc(c), Error);
  const std::vector<double> grid{0.5};
  c.estimators = default_templates();
  c.reps = 0;
  CHECK_THROWS_AS(bias_profile(c, grid), Error);
}

TEST_CASE("bias profile near the lower boundary")
{
  const std::vector<double> grid{0.01, 0.05, 0.1, 0.5};
  auto c = small_config(TrueDistribution::absnormal(), 50, 500);
  c.threads = 0;
  const auto prof = bias_profile(c, grid);
  REQUIRE(prof.curves.size() == 4);
  const auto& t2 = prof.curves[3];
  CHECK(t2.label == "transformed2");
  INFO("absnormal transformed2 bias " << t2.mean_error[0] << " se " << t2.se[0]);
  CHECK(std::abs(t2.mean_error[0]) < 3.0 * t2.se[0]);

  c.distribution = TrueDistribution::exponential(1.0);
  const auto ex = bias_profile(c, grid);
  const auto& naive = ex.curves[1];
  const auto& tr2 = ex.curves[3];
  CHECK(naive.label == "naive");
  const double gap = std::abs(naive.mean_error[0]) - std::abs(tr2.mean_error[0]);
  INFO("naive " << naive.mean_error[0] << " transformed2 " << tr2.mean_error[0]);
  CHECK(gap > 3.0 * std::sqrt(naive.se[0] * naive.se[0] + tr2.se[0] * tr2.se[0]));
}

TEST_CASE("normality diagnostic")
{
  auto c = small_config(TrueDistribution::exponential(1.0), 20, 10);
  c.estimators = {EstimatorTemplate{}};
  CHECK_THROWS_AS(normality_diagnostic(c, 1.0), Error);
  c.reps = 1000;
  c.threads = 0;
  const auto diag = normality_diagnostic(c, 1.0);
  REQUIRE(diag.size() == 1);
  CHECK(diag[0].reps == 1000);
  CHECK(diag[0].sd > 0.0);
  CHECK(std::isfinite(diag[0].skewness));
  CHECK(std::isfinite(diag[0].excess_kurtosis));
  CHECK(diag[0].standardized_mean == doctest::Approx((diag[0].mean - 1.0) / diag[0].sd));
}

TEST_CASE("study files")
{
  const auto s = parse_study("# comment\nmode = aise\ndistributions = gamma:2,3; uniform:0,1\n"
                             "n = 30\nreps = 5\nestimators = empirical, transformed2\n"
                             "kernel = gaussian\nseed = 9\n");
  REQUIRE(s.configs.size() == 2);
  CHECK(s.configs[0].distribution.name() == "gamma:2,3");
  CHECK(s.configs[1].n == 30);
  CHECK(s.configs[1].reps == 5);
  CHECK(s.configs[0].seed == 9);
  REQUIRE(s.configs[0].estimators.size() == 2);
  CHECK(s.configs[0].estimators[1].method == Method::transformed2);
  CHECK(s.configs[0].estimators[1].kernel == KernelFamily::gaussian);

  auto code_and_message = [](const std::string& text) {
    try {
      parse_study(text);
    } catch (const Error& e) {
      return std::make_pair(e.code(), std::string(e.what()));
    }
    return std::make_pair(ErrorCode::numeric, std::string("no error"));
  };
  auto [code, msg] = code_and_message("mode = aise\nreps = ten\n");
  CHECK(code == ErrorCode::config);
  CHECK(msg.find("line 2") != std::string::npos);
  std::tie(code, msg) = code_and_message("n = 5\nn = 6\n");
  CHECK(msg.find("line 2") != std::string::npos);
  std::tie(code, msg) = code_and_message("n = 5\n\nbogus = 1\n");
  CHECK(code == ErrorCode::config);
  CHECK(msg.find("line 3") != std::string::npos);
  std::tie(code, msg) = code_and_message("distribution = cauchy\n");
  CHECK(code == ErrorCode::config);
  std::tie(code, msg) = code_and_message("just text\n");
  CHECK(msg.find("line 1") != std::string::npos);
  std::tie(code, msg) = code_and_message("");
  CHECK(code == ErrorCode::config);
  std::tie(code, msg) = code_and_message("# only comments\n\n");
  CHECK(code == ErrorCode::config);
  std::tie(code, msg) = code_and_message("mode = normality\nreps = 10\n");
  CHECK(code == ErrorCode::config);
  CHECK_THROWS_AS(load_study("/nonexistent/file.cfg"), Error);
}

TEST_CASE("shipped study files parse")
{
  const std::string root = MRL_SOURCE_DIR;
  const auto t1 = load_study(root + "/configs/table1_desk.cfg");
  CHECK(t1.mode == StudyMode::aise);
  REQUIRE(t1.configs.size() == 5);
  for (const auto& c : t1.configs) {
    CHECK(c.n == 50);
    CHECK(c.reps == 200);
    CHECK(c.estimators.size() == 4);
  }
  const auto f2 = load_study(root + "/configs/figure2_bias.cfg");
  CHECK(f2.mode == StudyMode::bias_profile);
  REQUIRE(f2.configs.size() == 2);
  CHECK(f2.configs[0].reps == 500);
}

TEST_CASE("study output")
{
  auto study = parse_study("distributions = exponential:1; beta:3,2\nn = 25\nreps = 4\nthreads = 1\n");
  const auto res = run_study(study);
  std::ostringstream os;
  write_study_csv(os, res);
  std::istringstream in(os.str());
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "distribution,n,reps,estimator,metric,t,value,mc_se,failures,range_lo,range_hi");
  std::size_t rows = 0;
  bool quoted = false;
  while (std::getline(in, line)) {
    ++rows;
    quoted = quoted || line.rfind("\"beta:3,2\"", 0) == 0;
  }
  // Two distributions × four estimators × (aise + three ase + bandwidth).
  CHECK(rows == 2 * 4 * 5);
  CHECK(quoted);
  const auto table = format_study_table(res);
  CHECK(table.find("ISE range") != std::string::npos);
  CHECK(table.find("transformed2") != std::string::npos);

  study = parse_study("mode = bias_profile\ndistribution = exponential:1\nn = 20\nreps = 3\n"
                      "profile_points = 5\nprofile_min = 0.1\nprofile_max = 2\nthreads = 1\n");
  std::ostringstream bp;
  write_study_csv(bp, run_study(study));
  CHECK(bp.str().rfind("distribution,estimator,t,mean_error,mc_se\n", 0) == 0);
}
