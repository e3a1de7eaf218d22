#include "mrl/transform.hpp"

#include "mrl/error.hpp"
#include "mrl/quadrature.hpp"

#include <array>
#include <cstdio>
#include <numbers>
#include <utility>

namespace mrl {

SupportInterval::SupportInterval(double lo, double hi)
  : lower(lo)
  , upper(hi)
{
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi))
    fail(ErrorCode::invalid_argument, "support requires lower < upper");
}

SupportInterval
SupportInterval::real_line()
{
  const double inf = std::numeric_limits<double>::infinity();
  return SupportInterval(-inf, inf);
}

double
normal_pdf(double y) noexcept
{
  constexpr double c = std::numbers::inv_sqrtpi / std::numbers::sqrt2;
  return c * std::exp(-0.5 * y * y);
}

double
normal_cdf(double y) noexcept
{
  return 0.5 * std::erfc(-y / std::numbers::sqrt2);
}

namespace {

// Acklam's rational approximation, relative error about 1.2e-9.
double
acklam_quantile(double p)
{
  static constexpr std::array<double, 6> a = { -3.969683028665376e+01,
                                               2.209460984245205e+02,
                                               -2.759285104469687e+02,
                                               1.383577518672690e+02,
                                               -3.066479806614716e+01,
                                               2.506628277459239e+00 };
  static constexpr std::array<double, 5> b = { -5.447609879822406e+01,
                                               1.615858368580409e+02,
                                               -1.556989798598866e+02,
                                               6.680131188771972e+01,
                                               -1.328068155288572e+01 };
  static constexpr std::array<double, 6> c = { -7.784894002430293e-03,
                                               -3.223964580411365e-01,
                                               -2.400758277161838e+00,
                                               -2.549732539343734e+00,
                                               4.374664141464968e+00,
                                               2.938163982698783e+00 };
  static constexpr std::array<double, 4> d = { 7.784695709041462e-03,
                                               3.224671290700398e-01,
                                               2.445134137142996e+00,
                                               3.754408661907416e+00 };
  constexpr double p_low = 0.02425;

  auto tail = [&](double q) {
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  };

  if (p < p_low)
    return tail(std::sqrt(-2.0 * std::log(p)));
  if (p > 1.0 - p_low)
    return -tail(std::sqrt(-2.0 * std::log1p(-p)));
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace

double
normal_quantile(double p)
{
  if (!(p > 0.0 && p < 1.0))
    fail(ErrorCode::domain, "normal quantile requires 0 < p < 1");
  // Work in the lower tail so Φ(y) - p keeps full relative precision.
  if (p > 0.5)
    return -normal_quantile(1.0 - p);
  double y = acklam_quantile(p);
  y -= (normal_cdf(y) - p) / normal_pdf(y);
  return y;
}

Transform::Transform(TransformKind kind,
                     SupportInterval support,
                     std::string name)
  : kind_(kind)
  , support_(support)
  , span_(support.upper - support.lower)
  , name_(std::move(name))
{}

Transform
Transform::identity()
{
  return Transform(TransformKind::identity, SupportInterval::real_line(),
                   "identity");
}

Transform
Transform::exp(double lower)
{
  if (!std::isfinite(lower))
    fail(ErrorCode::invalid_argument, "exp transform needs a finite lower end");
  return Transform(TransformKind::exp,
                   SupportInterval(lower, std::numeric_limits<double>::infinity()),
                   "log");
}

Transform
Transform::probit(double lower, double upper)
{
  if (!std::isfinite(lower) || !std::isfinite(upper))
    fail(ErrorCode::invalid_argument, "probit transform needs finite end points");
  return Transform(TransformKind::probit, SupportInterval(lower, upper),
                   "probit");
}

Transform
Transform::custom(SupportInterval support,
                  Fn g,
                  Fn g_inv,
                  Fn g_d1,
                  Fn g_d2,
                  std::string name)
{
  Transform tr(TransformKind::custom, support, std::move(name));
  tr.g_ = std::move(g);
  tr.g_inv_ = std::move(g_inv);
  tr.d1_ = std::move(g_d1);
  tr.d2_ = std::move(g_d2);
  return tr;
}

double
Transform::g_inv(double t) const
{
  if (!support_.interior(t))
    fail(ErrorCode::domain,
         "g_inv: t = " + std::to_string(t) + " is not inside the support");
  switch (kind_) {
    case TransformKind::identity:
      return t;
    case TransformKind::exp:
      return std::log(t - support_.lower);
    case TransformKind::probit: {
      const double p_low = (t - support_.lower) / span_;
      if (p_low <= 0.5)
        return normal_quantile(p_low);
      return -normal_quantile((support_.upper - t) / span_);
    }
    case TransformKind::custom:
      break;
  }
  return g_inv_(t);
}

Transform
make_exp_transform(double lower)
{
  return Transform::exp(lower);
}

Transform
make_probit_transform(double lower, double upper)
{
  return Transform::probit(lower, upper);
}

Transform
make_transform(std::string_view name, const SupportInterval& support)
{
  if (name == "identity")
    return Transform::identity();
  if (name == "log" || name == "exp") {
    if (!support.lower_finite() || support.upper_finite())
      fail(ErrorCode::invalid_argument,
           "log transform needs a support of the form (a, inf)");
    return Transform::exp(support.lower);
  }
  if (name == "probit") {
    if (!support.bounded())
      fail(ErrorCode::invalid_argument, "probit transform needs a bounded support");
    return Transform::probit(support.lower, support.upper);
  }
  fail(ErrorCode::invalid_argument,
       "unknown transform '" + std::string(name) +
         "' (expected log, probit or identity)");
}

Transform
default_transform(const SupportInterval& support)
{
  if (support.bounded())
    return Transform::probit(support.lower, support.upper);
  if (support.lower_finite())
    return Transform::exp(support.lower);
  fail(ErrorCode::invalid_argument,
       "no boundary transform for supports unbounded below");
}

namespace {

std::string
format_detail(const char* fmt, double a, double b)
{
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

template<class F>
TransformCheck
run_check(std::string name, F&& body)
{
  try {
    return body(std::move(name));
  } catch (const std::exception& e) {
    return { std::move(name), false, std::string("exception: ") + e.what() };
  }
}

} // namespace

std::vector<TransformCheck>
validate_transform(const Transform& tr, const Kernel& kernel)
{
  std::vector<TransformCheck> out;

  out.push_back(run_check("monotone", [&](std::string name) -> TransformCheck {
    for (double y = -30.0; y <= 30.0; y += 0.25) {
      if (!(tr.d1(y) > 0.0))
        return { name, false, format_detail("g'(%g) = %g is not positive", y, tr.d1(y)) };
    }
    double prev = tr.g(-5.0);
    for (double y = -4.95; y <= 5.0; y += 0.05) {
      const double cur = tr.g(y);
      if (!(cur > prev))
        return { name, false, format_detail("g not increasing at y = %g (g = %g)", y, cur) };
      prev = cur;
    }
    return { name, true, "" };
  }));

  out.push_back(run_check("round_trip", [&](std::string name) -> TransformCheck {
    double worst = 0.0;
    double at = 0.0;
    for (double y = -5.0; y <= 5.0; y += 0.1) {
      const double t = tr.g(y);
      if (!tr.support().interior(t))
        continue;
      const double err = std::abs(tr.g(tr.g_inv(t)) - t) / std::max(1.0, std::abs(t));
      if (err > worst) {
        worst = err;
        at = t;
      }
    }
    if (worst > 1e-12)
      return { name, false, format_detail("relative error %g at t = %g", worst, at) };
    return { name, true, "" };
  }));

  out.push_back(run_check("first_derivative", [&](std::string name) -> TransformCheck {
    for (double y = -5.0; y <= 5.0; y += 0.25) {
      const double step = 1e-4;
      const double fd = (tr.g(y + step) - tr.g(y - step)) / (2.0 * step);
      const double d1 = tr.d1(y);
      if (std::abs(fd - d1) > 1e-5 * std::abs(d1))
        return { name, false, format_detail("g'(%g) = %g disagrees with finite difference", y, d1) };
    }
    return { name, true, "" };
  }));

  out.push_back(run_check("second_derivative", [&](std::string name) -> TransformCheck {
    for (double y = -5.0; y <= 5.0; y += 0.25) {
      const double step = 1e-4;
      const double fd = (tr.d1(y + step) - tr.d1(y - step)) / (2.0 * step);
      const double d2 = tr.d2(y);
      const double scale = std::abs(d2) + std::abs(tr.d1(y));
      if (std::abs(fd - d2) > 1e-5 * scale)
        return { name, false, format_detail("g''(%g) = %g disagrees with finite difference", y, d2) };
    }
    return { name, true, "" };
  }));

  out.push_back(run_check("limits", [&](std::string name) -> TransformCheck {
    const auto& s = tr.support();
    auto near_end = [](double value, double end, double direction) {
      if (std::isfinite(end))
        return std::abs(value - end) <= 1e-6 * std::max(1.0, std::abs(end));
      return direction * value >= 30.0;
    };
    const double lo = tr.g(-30.0);
    const double hi = tr.g(30.0);
    if (!near_end(lo, s.lower, -1.0))
      return { name, false, format_detail("g(-30) = %g does not approach %g", lo, s.lower) };
    if (!near_end(hi, s.upper, 1.0))
      return { name, false, format_detail("g(30) = %g does not approach %g", hi, s.upper) };
    return { name, true, "" };
  }));

  out.push_back(run_check("kernel_moment_finite", [&](std::string name) -> TransformCheck {
    const double r = kernel.radius();
    for (double u : { -0.1, 0.0, 0.1 }) {
      const double value = quad::gauss_legendre_composite(
        [&](double y) { return tr.d1(u * y) * kernel.density(y); }, -r, r, 1.0);
      if (!std::isfinite(value) || !(value > 0.0))
        return { name, false, format_detail("integral at u = %g is %g", u, value) };
    }
    return { name, true, "" };
  }));

  return out;
}

} // namespace mrl
