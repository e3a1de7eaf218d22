#include "mrl/error.hpp"
#include "mrl/kernel.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <random>

using namespace mrl;

namespace {

double
adaptive(const std::function<double(double)>& f, double a, double b)
{
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-12);
}

// Support of the kernel for quadrature purposes.
std::pair<double, double>
span_of(const Kernel& k)
{
  return k.compact() ? std::make_pair(-1.0, 1.0) : std::make_pair(-12.0, 12.0);
}

} // namespace

TEST_CASE("epanechnikov values at documented points")
{
  const Kernel k(KernelFamily::epanechnikov);
  auto v = kernel_eval(k, 0.0);
  CHECK(v.density == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(v.cumulative == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v.survival == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v.integrated_survival == doctest::Approx(0.1875).epsilon(1e-15));

  v = kernel_eval(k, -1.0);
  CHECK(v.density == 0.0);
  CHECK(v.cumulative == 0.0);
  CHECK(v.survival == 1.0);
  CHECK(v.integrated_survival == doctest::Approx(1.0).epsilon(1e-15));

  v = kernel_eval(k, -3.0);
  CHECK(v.density == 0.0);
  CHECK(v.cumulative == 0.0);
  CHECK(v.survival == 1.0);
  CHECK(v.integrated_survival == doctest::Approx(3.0).epsilon(1e-15));

  v = kernel_eval(k, 1.5);
  CHECK(v.survival == 0.0);
  CHECK(v.integrated_survival == 0.0);
}

TEST_CASE("gaussian values at zero")
{
  const Kernel k(KernelFamily::gaussian);
  const auto v = kernel_eval(k, 0.0);
  CHECK(v.density == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  CHECK(v.cumulative == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v.survival == doctest::Approx(0.5).epsilon(1e-15));
  const double oracle = adaptive([](double u) { return oracle::gauss_v(u); }, 0.0, 40.0);
  CHECK(v.integrated_survival == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(v.integrated_survival == doctest::Approx(0.3989422804014327).epsilon(1e-14));
}

TEST_CASE("kernel constants against quadrature")
{
  const Kernel epa(KernelFamily::epanechnikov);
  const Kernel gau(KernelFamily::gaussian);
  const double mu2_epa =
    oracle::simpson([](double y) { return y * y * oracle::epa_k(y); }, -1.0, 1.0, 2000);
  CHECK(epa.mu2() == doctest::Approx(mu2_epa).epsilon(1e-12));
  CHECK(epa.mu2() == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(gau.mu2() == doctest::Approx(1.0).epsilon(1e-15));

  const double rho_epa = oracle::trapezoid(
    [](double y) { return oracle::epa_v(y) * oracle::epa_w(y); }, -1.0, 1.0, 100000);
  CHECK(epa.rho() == doctest::Approx(rho_epa).epsilon(1e-9));
  const double rho_gau = oracle::trapezoid(
    [](double y) { return oracle::gauss_v(y) * oracle::gauss_w(y); }, -12.0, 12.0, 100000);
  CHECK(gau.rho() == doctest::Approx(rho_gau).epsilon(1e-9));

  const auto c = kernel_constants(epa);
  CHECK(c.mu2 == epa.mu2());
  CHECK(c.rho == epa.rho());
}

TEST_CASE("kernel functionals agree with the independent formulas")
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const Kernel epa(KernelFamily::epanechnikov);
  const Kernel gau(KernelFamily::gaussian);
  for (int i = 0; i < 500; ++i) {
    const double x = u(rng);
    CHECK(epa.density(x) == doctest::Approx(oracle::epa_k(x)).epsilon(1e-14));
    CHECK(epa.cumulative(x) == doctest::Approx(oracle::epa_w(x)).epsilon(1e-14));
    CHECK(gau.density(x) == doctest::Approx(oracle::gauss_k(x)).epsilon(1e-14));
    CHECK(gau.survival(x) == doctest::Approx(oracle::gauss_v(x)).epsilon(1e-13));
  }
}

TEST_CASE("W + V = 1 and symmetry")
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (KernelFamily f : {KernelFamily::epanechnikov, KernelFamily::gaussian}) {
    const Kernel k(f);
    for (int i = 0; i < 1000; ++i) {
      const double x = u(rng);
      CHECK(std::abs(k.cumulative(x) + k.survival(x) - 1.0) <= 2e-16);
      CHECK(k.density(x) == doctest::Approx(k.density(-x)).epsilon(1e-15));
      CHECK(k.density(x) >= 0.0);
    }
  }
}

TEST_CASE("W nondecreasing, V and integrated survival nonincreasing")
{
  for (KernelFamily f : {KernelFamily::epanechnikov, KernelFamily::gaussian}) {
    const Kernel k(f);
    double prev_w = -1.0, prev_v = 2.0, prev_iv = 1e300;
    for (int i = 0; i <= 4000; ++i) {
      const double x = -10.0 + 0.005 * i;
      const auto v = k.eval(x);
      CHECK(v.cumulative >= prev_w);
      CHECK(v.survival <= prev_v);
      CHECK(v.integrated_survival <= prev_iv);
      CHECK(v.integrated_survival >= 0.0);
      prev_w = v.cumulative;
      prev_v = v.survival;
      prev_iv = v.integrated_survival;
    }
  }
}

TEST_CASE("integrated survival matches quadrature of V")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (KernelFamily f : {KernelFamily::epanechnikov, KernelFamily::gaussian}) {
    const Kernel k(f);
    const double end = k.compact() ? 1.0 : 40.0;
    for (int i = 0; i < 100; ++i) {
      const double x = u(rng);
      double ref = 0.0;
      if (k.compact()) {
        const double a = std::max(x, -1.0);
        ref = adaptive([](double z) { return oracle::epa_v(z); }, a, end) + std::max(0.0, -1.0 - x);
      } else {
        ref = adaptive([](double z) { return oracle::gauss_v(z); }, x, end);
      }
      CHECK(std::abs(k.integrated_survival(x) - ref) < 1e-10);
    }
  }
}

TEST_CASE("integral identities of the kernel functionals")
{
  for (KernelFamily f : {KernelFamily::epanechnikov, KernelFamily::gaussian}) {
    const Kernel k(f);
    const auto [a, b] = span_of(k);
    const double vk = adaptive([&](double x) { return k.survival(x) * k.density(x); }, a, b);
    const double xvk = adaptive([&](double x) { return x * k.survival(x) * k.density(x); }, a, b);
    const double vw = adaptive([&](double x) { return k.survival(x) * k.cumulative(x); }, a, b);
    const double ivk =
      adaptive([&](double x) { return k.integrated_survival(x) * k.density(x); }, a, b);
    CHECK(std::abs(vk - 0.5) < 1e-10);
    CHECK(std::abs(xvk + 0.5 * vw) < 1e-10);
    CHECK(std::abs(ivk - vw) < 1e-10);
    CHECK(std::abs(vw - k.rho()) < 1e-10);
  }
}

TEST_CASE("radius and compactness")
{
  CHECK(Kernel(KernelFamily::epanechnikov).radius() == 1.0);
  CHECK(Kernel(KernelFamily::epanechnikov).compact());
  CHECK(Kernel(KernelFamily::gaussian).radius() == 8.0);
  CHECK_FALSE(Kernel(KernelFamily::gaussian).compact());
  // Mass beyond the truncation radius is negligible.
  CHECK(Kernel(KernelFamily::gaussian).survival(8.0) < 1e-15);
}

TEST_CASE("kernel names parse")
{
  CHECK(parse_kernel_family("epanechnikov") == KernelFamily::epanechnikov);
  CHECK(parse_kernel_family("gaussian") == KernelFamily::gaussian);
  CHECK_THROWS_AS(parse_kernel_family("triangular"), Error);
  CHECK(Kernel(KernelFamily::gaussian).name() == "gaussian");
}
