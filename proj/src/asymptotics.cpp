#include "mrl/asymptotics.hpp"

#include "mrl/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace mrl {

namespace {


template<class F>
double
adaptive(F&& f, double a, double b)
{
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
    f, a, b, 20, 1e-12, &err);
  if (!std::isfinite(value) || !(err < 1e-9 + 1e-9 * std::abs(value)))
    fail(ErrorCode::numeric, "adaptive quadrature did not converge");
  return value;
}

// ∫_a^b f over panels of the given width, b finite.
template<class F>
double
panelled(F&& f, double a, double b, double width)
{
  using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  const double step = (b - a) / panels;
  auto lower = [&](int i) { return a + step * i; };
  auto upper = [&](int i) { return i + 1 == panels ? b : a + step * (i + 1); };
  std::vector<double> rough(panels);
  double scale = 0.0;
  for (int i = 0; i < panels; ++i) {
    double l1 = 0.0;
    gk::integrate(f, lower(i), upper(i), 0, 0.0, nullptr, &l1);
    rough[i] = l1;
    scale += l1;
  }
  double total = 0.0, budget = 0.0;
  for (int i = 0; i < panels; ++i) {
    if (rough[i] == 0.0)
      continue;
    const double tol = std::max(1e-13, 1e-13 * scale / rough[i]);
    double err = 0.0;
    total += gk::integrate(f, lower(i), upper(i), 12, tol, &err);
    budget += err;
  }
  if (!std::isfinite(total) || !(budget < 1e-9 + 1e-9 * std::abs(total)))
    fail(ErrorCode::numeric, "tail integral did not converge");
  return total;
}

// Upper end of the t range that matters for tail integrals.
double
effective_upper(const TrueDistribution& dist)
{
  if (dist.support().upper_finite())
    return std::nextafter(dist.support().upper, dist.support().lower);
  return dist.mean() + 80.0 * dist.sd();
}

void
require_interior(const TrueDistribution& dist, const Transform& tr, double t)
{
  if (!dist.support().interior(t))
    fail(ErrorCode::domain, "t = " + std::to_string(t) + " is not inside the support");
  if (tr.kind() != TransformKind::identity && !(tr.support() == dist.support()))
    fail(ErrorCode::invalid_argument,
         "transform range does not match the distribution support");
}

double
b1_at(const TrueDistribution& dist, const Transform& tr, double s)
{
  const double x = tr.g_inv(s);
  const double d1 = tr.d1(x);
  return tr.d2(x) * dist.pdf(s) + d1 * d1 * dist.pdf_derivative(s);
}

} // namespace

BCoefficients
eval_b(const TrueDistribution& dist, const Transform& tr, double t)
{
  require_interior(dist, tr, t);
  const double x = tr.g_inv(t);
  const double d1 = tr.d1(x);
  const double d2 = tr.d2(x);
  const double f = dist.pdf(t);
  const double s = dist.survival(t);
  const double m = dist.mrl(t);

  const double tail = panelled(
    [&](double z) {
      const double gz = tr.g(z);
      if (!dist.support().interior(gz))
        return 0.0;
      const double fz = dist.pdf(gz);
      if (fz == 0.0)
        return 0.0;
      return tr.d2(z) * tr.d1(z) * fz;
    },
    x, std::max(x, tr.g_inv(effective_upper(dist))), 0.5);

  BCoefficients b;
  b.b1 = d2 * f + d1 * d1 * dist.pdf_derivative(t);
  b.b2 = d1 * d1 * f + tail;
  b.b3 = d1 * d1 * f - d2 * s;
  b.b4 = 2.0 * dist.double_cum_survival(t) - s * m * m;
  b.b5 = d1 * f * m * m;
  return b;
}

double
b2_from_b1(const TrueDistribution& dist, const Transform& tr, double t)
{
  require_interior(dist, tr, t);
  return -panelled([&](double s) { return b1_at(dist, tr, s); }, t, effective_upper(dist),
                   0.5 * dist.sd());
}

TheoryTarget
parse_theory_target(std::string_view name)
{
  if (name == "survival")
    return TheoryTarget::survival;
  if (name == "cum_survival1")
    return TheoryTarget::cum_survival_first;
  if (name == "cum_survival2")
    return TheoryTarget::cum_survival_second;
  if (name == "transformed1" || name == "mrl1")
    return TheoryTarget::mrl_first;
  if (name == "transformed2" || name == "mrl2")
    return TheoryTarget::mrl_second;
  fail(ErrorCode::invalid_argument,
       "unknown theory target '" + std::string(name) +
         "' (expected transformed1, transformed2, survival, cum_survival1 or "
         "cum_survival2)");
}

BiasVariance
theoretical_bias_variance(const TrueDistribution& dist,
                          const Transform& tr,
                          const Kernel& kernel,
                          double h,
                          std::size_t n,
                          double t,
                          TheoryTarget target)
{
  if (n < 1)
    fail(ErrorCode::invalid_argument, "n must be at least 1");
  if (!(h > 0.0))
    fail(ErrorCode::invalid_argument, "bandwidth must be positive");
  const BCoefficients b = eval_b(dist, tr, t);
  const double mu2 = kernel.mu2();
  const double rho = kernel.rho();
  const double nd = static_cast<double>(n);
  const double s = dist.survival(t);
  const double F = 1.0 - s;
  const double cs = dist.cum_survival(t);
  const double m = dist.mrl(t);
  const double x = tr.g_inv(t);

  BiasVariance out{};
  out.covariance = cs * F / nd;
  const double cum_var = (2.0 * dist.double_cum_survival(t) - cs * cs) / nd;

  switch (target) {
    case TheoryTarget::survival:
      out.bias = -0.5 * h * h * b.b1 * mu2;
      out.variance = (s * F - h * tr.d1(x) * dist.pdf(t) * rho) / nd;
      break;
    case TheoryTarget::cum_survival_first:
      out.bias = 0.5 * h * h * b.b2 * mu2;
      out.variance = cum_var;
      break;
    case TheoryTarget::cum_survival_second:
      out.bias = 0.5 * h * h * b.b3 * mu2;
      out.variance = cum_var;
      break;
    case TheoryTarget::mrl_first:
    case TheoryTarget::mrl_second: {
      if (!(s > 0.0))
        fail(ErrorCode::numeric, "MRL asymptotics need S(t) > 0");
      const double bb = target == TheoryTarget::mrl_first ? b.b2 : b.b3;
      out.bias = 0.5 * h * h / s * (bb + m * b.b1) * mu2;
      out.variance = (b.b4 - h * b.b5 * rho) / (nd * s * s);
      break;
    }
  }
  return out;
}

} // namespace mrl
