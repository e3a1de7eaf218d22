#include "mrl/mrl.h"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

struct SampleHandle
{
  mrl_sample* p = nullptr;
  ~SampleHandle() { mrl_sample_destroy(p); }
};

struct CurveHandle
{
  mrl_curve* p = nullptr;
  ~CurveHandle() { mrl_curve_destroy(p); }
};

std::string
temp_path(const char* name)
{
  return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("names and versions")
{
  CHECK(std::string(mrl_version()).size() > 0);
  CHECK(std::string(mrl_status_name(MRL_OK)) == "ok");
  CHECK(std::string(mrl_status_name(MRL_ERR_DATA)) != std::string(mrl_status_name(MRL_ERR_NUMERIC)));
  mrl_kernel k;
  CHECK(mrl_parse_kernel("gaussian", &k) == MRL_OK);
  CHECK(k == MRL_KERNEL_GAUSSIAN);
  CHECK(mrl_parse_kernel("box", &k) == MRL_ERR_INVALID_ARGUMENT);
  CHECK(std::string(mrl_last_error()).find("box") != std::string::npos);
  mrl_transform t;
  CHECK(mrl_parse_transform("log", &t) == MRL_OK);
  CHECK(t == MRL_TRANSFORM_LOG);
  CHECK(mrl_parse_transform("probit", &t) == MRL_OK);
  CHECK(t == MRL_TRANSFORM_PROBIT);
  mrl_method m;
  CHECK(mrl_parse_method("transformed1", &m) == MRL_OK);
  CHECK(m == MRL_METHOD_TRANSFORMED1);
  CHECK(std::string(mrl_method_name(MRL_METHOD_NAIVE)) == "naive");
  CHECK(mrl_parse_method(nullptr, &m) == MRL_ERR_INVALID_ARGUMENT);
  CHECK(mrl_parse_method("naive", nullptr) == MRL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("kernel functions")
{
  double v[4];
  REQUIRE(mrl_kernel_eval(MRL_KERNEL_EPANECHNIKOV, 0.0, v) == MRL_OK);
  CHECK(v[0] == doctest::Approx(0.75));
  CHECK(v[1] == doctest::Approx(0.5));
  CHECK(v[2] == doctest::Approx(0.5));
  CHECK(v[3] == doctest::Approx(0.1875));
  double mu2 = 0, rho = 0;
  REQUIRE(mrl_kernel_constants(MRL_KERNEL_EPANECHNIKOV, &mu2, &rho) == MRL_OK);
  CHECK(mu2 == doctest::Approx(0.2));
  CHECK(rho == doctest::Approx(9.0 / 35.0));
  CHECK(mrl_kernel_eval(static_cast<mrl_kernel>(7), 0.0, v) == MRL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("samples")
{
  const double x[] = {3.0, 1.0, 2.0};
  SampleHandle s;
  REQUIRE(mrl_sample_create(x, 3, 0.0, INFINITY, &s.p) == MRL_OK);
  CHECK(mrl_sample_size(s.p) == 3);
  CHECK(mrl_sample_values(s.p)[0] == 1.0);
  CHECK(mrl_sample_mean(s.p) == 2.0);
  double lo = -1, hi = -1;
  mrl_sample_support(s.p, &lo, &hi);
  CHECK(lo == 0.0);
  CHECK(std::isinf(hi));

  mrl_sample* bad = nullptr;
  const double neg[] = {-1.0, 2.0};
  CHECK(mrl_sample_create(neg, 2, 0.0, INFINITY, &bad) != MRL_OK);
  CHECK(bad == nullptr);
  CHECK(mrl_sample_create(nullptr, 2, 0.0, 1.0, &bad) == MRL_ERR_INVALID_ARGUMENT);
  CHECK(mrl_sample_create(x, 0, 0.0, INFINITY, &bad) != MRL_OK);
  CHECK(mrl_sample_size(nullptr) == 0);
  mrl_sample_destroy(nullptr);
}

TEST_CASE("reading a sample from CSV")
{
  const auto path = temp_path("mrl_c_api_sample.csv");
  {
    std::ofstream f(path);
    f << "id,time\n1,10\n2,\n3,30\n4,20\n";
  }
  SampleHandle s;
  size_t dropped = 99;
  REQUIRE(mrl_sample_read_csv(path.c_str(), "time", nullptr, &s.p, &dropped) == MRL_OK);
  CHECK(dropped == 1);
  CHECK(mrl_sample_size(s.p) == 3);
  mrl_sample* other = nullptr;
  CHECK(mrl_sample_read_csv(path.c_str(), "days", nullptr, &other, nullptr) == MRL_ERR_DATA);
  CHECK(std::string(mrl_last_error()).find("time") != std::string::npos);
  const double sup[] = {15.0, INFINITY};
  CHECK(mrl_sample_read_csv(path.c_str(), "time", sup, &other, nullptr) == MRL_ERR_DATA);
  CHECK(mrl_sample_read_csv("/nonexistent.csv", "time", nullptr, &other, nullptr) != MRL_OK);
  std::filesystem::remove(path);
}

TEST_CASE("point and curve evaluation")
{
  const double e = std::exp(1.0);
  SampleHandle s;
  REQUIRE(mrl_sample_create(&e, 1, 0.0, INFINITY, &s.p) == MRL_OK);
  mrl_estimator_spec spec{MRL_METHOD_TRANSFORMED2, MRL_KERNEL_EPANECHNIKOV, MRL_TRANSFORM_LOG, 0.5};
  mrl_point p;
  REQUIRE(mrl_evaluate_point(s.p, &spec, e, &p) == MRL_OK);
  CHECK(p.survival == doctest::Approx(0.5));
  CHECK(p.flag == MRL_FLAG_OK);
  REQUIRE(mrl_evaluate_point(s.p, &spec, e * e, &p) == MRL_OK);
  CHECK(p.flag == MRL_FLAG_TAIL_DEGENERATE);

  spec.bandwidth = -1.0;
  CHECK(mrl_evaluate_point(s.p, &spec, 1.0, &p) == MRL_ERR_SELECTION);

  const double xs[] = {0.3, 0.9, 1.7, 2.2, 4.1, 0.6, 1.1};
  SampleHandle big;
  REQUIRE(mrl_sample_create(xs, 7, 0.0, INFINITY, &big.p) == MRL_OK);
  double h = 0;
  REQUIRE(mrl_select_bandwidth(big.p, MRL_METHOD_TRANSFORMED2, MRL_KERNEL_EPANECHNIKOV,
                               MRL_TRANSFORM_AUTO, &h) == MRL_OK);
  CHECK(h > 0.0);
  std::vector<double> grid{-1.0, 0.5, 1.0, 2.0, 50.0};
  CurveHandle c;
  REQUIRE(mrl_evaluate_curve(big.p, &spec, grid.data(), grid.size(), &c.p) == MRL_OK);
  CHECK(mrl_curve_size(c.p) == 5);
  CHECK(mrl_curve_bandwidth(c.p) == h);
  double t = 0;
  REQUIRE(mrl_curve_point(c.p, 0, &t, &p) == MRL_OK);
  CHECK(t == -1.0);
  CHECK(p.flag == MRL_FLAG_ERROR);
  REQUIRE(mrl_curve_point(c.p, 4, &t, &p) == MRL_OK);
  CHECK(p.flag == MRL_FLAG_TAIL_DEGENERATE);
  CHECK(mrl_curve_point(c.p, 5, &t, &p) == MRL_ERR_INVALID_ARGUMENT);

  std::vector<double> unsorted{2.0, 1.0};
  mrl_curve* bad = nullptr;
  CHECK(mrl_evaluate_curve(big.p, &spec, unsorted.data(), 2, &bad) == MRL_ERR_INVALID_ARGUMENT);
  spec.transform = MRL_TRANSFORM_PROBIT;
  CHECK(mrl_evaluate_curve(big.p, &spec, grid.data(), grid.size(), &bad) != MRL_OK);
  CHECK(bad == nullptr);
  CHECK(mrl_evaluate_curve(nullptr, &spec, grid.data(), grid.size(), &bad) ==
        MRL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("curve files through the C interface")
{
  const double xs[] = {0.3, 0.9, 1.7, 2.2, 4.1};
  SampleHandle s;
  REQUIRE(mrl_sample_create(xs, 5, 0.0, INFINITY, &s.p) == MRL_OK);
  const mrl_estimator_spec a{MRL_METHOD_EMPIRICAL, MRL_KERNEL_EPANECHNIKOV, MRL_TRANSFORM_AUTO, 0};
  const mrl_estimator_spec b{MRL_METHOD_TRANSFORMED1, MRL_KERNEL_GAUSSIAN, MRL_TRANSFORM_LOG, 0.4};
  const double grid[] = {0.1, 0.5, 1.0, 3.0};
  CurveHandle ca, cb, back;
  REQUIRE(mrl_evaluate_curve(s.p, &a, grid, 4, &ca.p) == MRL_OK);
  REQUIRE(mrl_evaluate_curve(s.p, &b, grid, 4, &cb.p) == MRL_OK);
  const auto path = temp_path("mrl_c_api_curve.csv");
  REQUIRE(mrl_curve_write_csv(cb.p, path.c_str()) == MRL_OK);
  REQUIRE(mrl_curve_read_csv(path.c_str(), &back.p) == MRL_OK);
  for (size_t i = 0; i < 4; ++i) {
    double t1, t2;
    mrl_point p1, p2;
    mrl_curve_point(cb.p, i, &t1, &p1);
    mrl_curve_point(back.p, i, &t2, &p2);
    CHECK(t1 == t2);
    CHECK(p1.mrl == p2.mrl);
    CHECK(p1.flag == p2.flag);
  }
  const mrl_curve* both[] = {ca.p, cb.p};
  const char* labels[] = {"empirical", "transformed1"};
  REQUIRE(mrl_curves_write_combined(both, labels, 2, path.c_str()) == MRL_OK);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header.rfind("t,empirical_survival,", 0) == 0);
  std::filesystem::remove(path);
  CHECK(mrl_curve_write_csv(cb.p, "/nonexistent/dir/x.csv") == MRL_ERR_IO);
}

TEST_CASE("boundary limits")
{
  const double xs[] = {1.0, 2.0, 3.0};
  SampleHandle s;
  REQUIRE(mrl_sample_create(xs, 3, 0.0, INFINITY, &s.p) == MRL_OK);
  const mrl_estimator_spec spec{MRL_METHOD_TRANSFORMED2, MRL_KERNEL_EPANECHNIKOV, MRL_TRANSFORM_LOG, 0.3};
  mrl_boundary b;
  REQUIRE(mrl_boundary_limits(s.p, &spec, &b) == MRL_OK);
  CHECK(b.lower_second.mrl == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(b.lower_second.survival == 1.0);
  CHECK(b.upper.survival == 0.0);
  const mrl_estimator_spec emp{MRL_METHOD_EMPIRICAL, MRL_KERNEL_EPANECHNIKOV, MRL_TRANSFORM_AUTO, 0};
  CHECK(mrl_boundary_limits(s.p, &emp, &b) == MRL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("theory and distributions")
{
  mrl_theory_row row;
  REQUIRE(mrl_theory_eval("exponential:1", MRL_TRANSFORM_LOG, MRL_KERNEL_EPANECHNIKOV,
                          MRL_METHOD_TRANSFORMED2, 0.3, 200, 2.0, &row) == MRL_OK);
  CHECK(row.t == 2.0);
  CHECK(row.b1 == doctest::Approx(2.0 * std::exp(-2.0) * (1.0 - 2.0)));
  CHECK(row.variance > 0.0);
  CHECK(mrl_theory_eval("exponential:1", MRL_TRANSFORM_PROBIT, MRL_KERNEL_EPANECHNIKOV,
                        MRL_METHOD_TRANSFORMED2, 0.3, 200, 2.0, &row) != MRL_OK);
  CHECK(mrl_theory_eval("exponential:1", MRL_TRANSFORM_LOG, MRL_KERNEL_EPANECHNIKOV,
                        MRL_METHOD_NAIVE, 0.3, 200, 2.0, &row) == MRL_ERR_INVALID_ARGUMENT);
  CHECK(mrl_theory_eval("exponential:1", MRL_TRANSFORM_LOG, MRL_KERNEL_EPANECHNIKOV,
                        MRL_METHOD_TRANSFORMED2, -0.3, 200, 2.0, &row) == MRL_ERR_INVALID_ARGUMENT);
  CHECK(mrl_theory_eval("exponential:1", MRL_TRANSFORM_LOG, MRL_KERNEL_EPANECHNIKOV,
                        MRL_METHOD_TRANSFORMED2, 0.3, 200, -2.0, &row) == MRL_ERR_DOMAIN);

  double m = 0;
  REQUIRE(mrl_distribution_mrl("uniform:0,1", 0.4, &m) == MRL_OK);
  CHECK(m == doctest::Approx(0.3));
  double lo, hi, mean, sd;
  REQUIRE(mrl_distribution_support("beta:3,2", &lo, &hi) == MRL_OK);
  CHECK(hi == 1.0);
  REQUIRE(mrl_distribution_moments("gamma:2,3", &mean, &sd) == MRL_OK);
  CHECK(mean == doctest::Approx(6.0));
  CHECK(sd == doctest::Approx(std::sqrt(18.0)));
  CHECK(mrl_distribution_mrl("pareto:1", 0.4, &m) == MRL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("studies")
{
  mrl_study* st = nullptr;
  CHECK(mrl_study_parse("", &st) == MRL_ERR_CONFIG);
  CHECK(st == nullptr);
  CHECK(mrl_study_parse("n = 5\nwhat = 1\n", &st) == MRL_ERR_CONFIG);
  CHECK(std::string(mrl_last_error()).find("line 2") != std::string::npos);
  CHECK(mrl_study_load("/nonexistent.cfg", &st) != MRL_OK);

  REQUIRE(mrl_study_parse("distribution = exponential:1\nn = 20\nreps = 3\n", &st) == MRL_OK);
  mrl_study_set_seed(st, 5);
  mrl_study_set_threads(st, 1);
  mrl_study_result* r1 = nullptr;
  mrl_study_result* r2 = nullptr;
  REQUIRE(mrl_study_run(st, &r1) == MRL_OK);
  REQUIRE(mrl_study_run(st, &r2) == MRL_OK);
  const std::string t1 = mrl_study_result_table(r1);
  CHECK(t1.find("ISE range") != std::string::npos);
  const auto p1 = temp_path("mrl_c_api_study1.csv");
  const auto p2 = temp_path("mrl_c_api_study2.csv");
  REQUIRE(mrl_study_result_write_csv(r1, p1.c_str()) == MRL_OK);
  REQUIRE(mrl_study_result_write_csv(r2, p2.c_str()) == MRL_OK);
  std::ifstream f1(p1), f2(p2);
  const std::string s1((std::istreambuf_iterator<char>(f1)), {});
  const std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
  CHECK(s1.rfind("distribution,n,reps,estimator,metric", 0) == 0);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
  mrl_study_result_destroy(r1);
  mrl_study_result_destroy(r2);
  mrl_study_destroy(st);
  mrl_study_destroy(nullptr);
  mrl_study_result_destroy(nullptr);
}

TEST_CASE("last error is cleared by a successful call")
{
  mrl_kernel k;
  CHECK(mrl_parse_kernel("nope", &k) != MRL_OK);
  CHECK(std::string(mrl_last_error()).size() > 0);
  CHECK(mrl_parse_kernel("epanechnikov", &k) == MRL_OK);
  CHECK(std::string(mrl_last_error()).empty());
}
