#include "mrl/estimators.hpp"

#include "mrl/error.hpp"
#include "mrl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mrl {

std::string_view
method_name(Method m) noexcept
{
  switch (m) {
    case Method::empirical:
      return "empirical";
    case Method::naive_kernel:
      return "naive";
    case Method::transformed1:
      return "transformed1";
    case Method::transformed2:
      return "transformed2";
  }
  return "unknown";
}

Method
parse_method(std::string_view name)
{
  if (name == "empirical")
    return Method::empirical;
  if (name == "naive" || name == "naive_kernel")
    return Method::naive_kernel;
  if (name == "transformed1")
    return Method::transformed1;
  if (name == "transformed2")
    return Method::transformed2;
  fail(ErrorCode::invalid_argument,
       "unknown estimator '" + std::string(name) +
         "' (expected empirical, naive, transformed1 or transformed2)");
}

std::string_view
flag_name(PointFlag f) noexcept
{
  switch (f) {
    case PointFlag::ok:
      return "ok";
    case PointFlag::tail_degenerate:
      return "tail-degenerate";
    case PointFlag::error:
      return "error";
  }
  return "error";
}

PointFlag
parse_flag(std::string_view name)
{
  if (name == "ok")
    return PointFlag::ok;
  if (name == "tail-degenerate")
    return PointFlag::tail_degenerate;
  if (name == "error")
    return PointFlag::error;
  fail(ErrorCode::data, "unknown point flag '" + std::string(name) + "'");
}

void
EstimatorSpec::validate(const Sample& sample) const
{
  if (method == Method::empirical)
    return;
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    fail(ErrorCode::invalid_argument, "bandwidth must be a positive finite number");
  if (method == Method::naive_kernel)
    return;
  if (transform.kind() != TransformKind::identity &&
      !(transform.support() == sample.support()))
    fail(ErrorCode::invalid_argument,
         "transform range does not match the sample support");
}

namespace {

PointEstimate
finish(double survival, double cum_survival)
{
  PointEstimate p;
  p.survival = std::clamp(survival, 0.0, 1.0);
  if (!(p.survival > 0.0)) {
    p.survival = 0.0;
    p.cum_survival = 0.0;
    p.mrl = 0.0;
    p.flag = PointFlag::tail_degenerate;
    return p;
  }
  p.cum_survival = cum_survival;
  p.mrl = cum_survival / p.survival;
  if (!std::isfinite(p.mrl))
    fail(ErrorCode::numeric, "non-finite MRL estimate");
  return p;
}

std::vector<double>
suffix_sums(std::span<const double> v)
{
  std::vector<double> out(v.size() + 1, 0.0);
  for (std::size_t i = v.size(); i-- > 0;)
    out[i] = out[i + 1] + v[i];
  return out;
}

// ∫_a^b g'(z) V((z − y)/h) dz on a single kernel window.
double
window_first(const Transform& tr, const Kernel& k, double h, double a, double b, double y)
{
  return quad::gauss_legendre_composite(
    [&](double z) { return tr.d1(z) * k.survival((z - y) / h); }, a, b, 2.0 * h);
}

// ∫_{x−reach}^{hi} g'(z) V((x − z)/h) dz, split at x.
double
window_second(const Transform& tr, const Kernel& k, double h, double x, double hi)
{
  const double reach = k.radius() * h;
  auto f = [&](double z) { return tr.d1(z) * k.survival((x - z) / h); };
  if (hi > x)
    return quad::gauss_legendre_composite(f, x - reach, x, 2.0 * h) +
           quad::gauss_legendre_composite(f, x, hi, 2.0 * h);
  return quad::gauss_legendre_composite(f, x - reach, hi, 2.0 * h);
}

void
check_finite(double v, const char* what)
{
  if (!std::isfinite(v))
    fail(ErrorCode::numeric, std::string("non-finite ") + what);
}

} // namespace

double
integrated_survival_term1(const Transform& tr,
                          const Kernel& kernel,
                          double h,
                          double x,
                          double y)
{
  const double reach = kernel.radius() * h;
  if (x >= y + reach)
    return 0.0;
  double plateau = 0.0;
  double lo = x;
  if (x < y - reach) {
    plateau = tr.g(y - reach) - tr.g(x);
    lo = y - reach;
  }
  const double value = plateau + window_first(tr, kernel, h, lo, y + reach, y);
  check_finite(value, "cumulative survival term");
  return value;
}

double
integrated_survival_term2(const Transform& tr,
                          const Kernel& kernel,
                          double h,
                          double x,
                          double y)
{
  const double reach = kernel.radius() * h;
  if (y <= x - reach)
    return 0.0;
  double value = window_second(tr, kernel, h, x, std::min(y, x + reach));
  if (y > x + reach)
    value += tr.g(y) - tr.g(x + reach);
  check_finite(value, "cumulative survival term");
  return value;
}

// ---------------------------------------------------------------------------

EmpiricalEstimator::EmpiricalEstimator(const Sample& sample)
  : support_(sample.support())
  , xs_(sample.values().begin(), sample.values().end())
  , suffix_(suffix_sums(xs_))
{}

PointEstimate
EmpiricalEstimator::at(double t) const
{
  if (!support_.contains(t))
    fail(ErrorCode::domain, "t = " + std::to_string(t) + " is outside the support");
  const auto first = static_cast<std::size_t>(
    std::upper_bound(xs_.begin(), xs_.end(), t) - xs_.begin());
  const double n = static_cast<double>(xs_.size());
  const auto above = static_cast<double>(xs_.size() - first);
  return finish(above / n, (suffix_[first] - above * t) / n);
}

NaiveKernelEstimator::NaiveKernelEstimator(const Sample& sample, Kernel kernel, double h)
  : support_(sample.support())
  , kernel_(kernel)
  , h_(h)
  , xs_(sample.values().begin(), sample.values().end())
  , suffix_(suffix_sums(xs_))
{
  if (!(h > 0.0) || !std::isfinite(h))
    fail(ErrorCode::invalid_argument, "bandwidth must be a positive finite number");
}

PointEstimate
NaiveKernelEstimator::at(double t) const
{
  if (!support_.contains(t))
    fail(ErrorCode::domain, "t = " + std::to_string(t) + " is outside the support");
  const double reach = kernel_.radius() * h_;
  // Observations at or beyond t + reach have V = 1 and h𝕍 = X − t.
  const auto lo = static_cast<std::size_t>(
    std::upper_bound(xs_.begin(), xs_.end(), t - reach) - xs_.begin());
  const auto hi = static_cast<std::size_t>(
    std::lower_bound(xs_.begin(), xs_.end(), t + reach) - xs_.begin());
  const auto full = static_cast<double>(xs_.size() - hi);
  double s = full;
  double cs = suffix_[hi] - full * t;
  for (std::size_t i = lo; i < hi; ++i) {
    const double u = (t - xs_[i]) / h_;
    s += kernel_.survival(u);
    cs += h_ * kernel_.integrated_survival(u);
  }
  const double n = static_cast<double>(xs_.size());
  return finish(s / n, cs / n);
}

// ---------------------------------------------------------------------------

TransformedEstimator::TransformedEstimator(const Sample& sample,
                                           Transform transform,
                                           Kernel kernel,
                                           double h,
                                           bool prepare_first_variant)
  : transform_(std::move(transform))
  , kernel_(kernel)
  , h_(h)
  , reach_(kernel.radius() * h)
  , first_ready_(prepare_first_variant)
{
  if (!(h > 0.0) || !std::isfinite(h))
    fail(ErrorCode::invalid_argument, "bandwidth must be a positive finite number");
  if (transform_.kind() != TransformKind::identity &&
      !(transform_.support() == sample.support()))
    fail(ErrorCode::invalid_argument,
         "transform range does not match the sample support");

  ys_.reserve(sample.size());
  for (double v : sample.values())
    ys_.push_back(transform_.g_inv(v));

  std::vector<double> gy(ys_.size());
  for (std::size_t i = 0; i < ys_.size(); ++i)
    gy[i] = transform_.g(ys_[i]);
  gy_suffix_ = suffix_sums(gy);

  if (first_ready_) {
    std::vector<double> full(ys_.size());
    for (std::size_t i = 0; i < ys_.size(); ++i) {
      const double y = ys_[i];
      full[i] = transform_.g(y - reach_) +
                window_first(transform_, kernel_, h_, y - reach_, y + reach_, y);
    }
    first_suffix_ = suffix_sums(full);
  }
}

double
TransformedEstimator::x_of(double t) const
{
  const double x = transform_.g_inv(t);
  if (transform_.kind() == TransformKind::probit && std::abs(x) > 30.0)
    fail(ErrorCode::domain,
         "t = " + std::to_string(t) +
           " is too close to the support end; use the boundary limits");
  return x;
}

double
TransformedEstimator::survival_x(double x) const
{
  const auto lo = static_cast<std::size_t>(
    std::upper_bound(ys_.begin(), ys_.end(), x - reach_) - ys_.begin());
  const auto hi = static_cast<std::size_t>(
    std::lower_bound(ys_.begin(), ys_.end(), x + reach_) - ys_.begin());
  double s = static_cast<double>(ys_.size() - hi);
  for (std::size_t i = lo; i < hi; ++i)
    s += kernel_.survival((x - ys_[i]) / h_);
  return s / static_cast<double>(ys_.size());
}

double
TransformedEstimator::cum_first_x(double x) const
{
  if (!first_ready_)
    fail(ErrorCode::invalid_argument,
         "estimator was prepared without the first variant");
  const auto lo = static_cast<std::size_t>(
    std::upper_bound(ys_.begin(), ys_.end(), x - reach_) - ys_.begin());
  const auto hi = static_cast<std::size_t>(
    std::lower_bound(ys_.begin(), ys_.end(), x + reach_) - ys_.begin());
  const auto full = static_cast<double>(ys_.size() - hi);
  double cs = first_suffix_[hi] - full * transform_.g(x);
  for (std::size_t i = lo; i < hi; ++i)
    cs += window_first(transform_, kernel_, h_, x, ys_[i] + reach_, ys_[i]);
  cs /= static_cast<double>(ys_.size());
  check_finite(cs, "cumulative survival estimate");
  return cs;
}

double
TransformedEstimator::cum_second_x(double x) const
{
  const auto lo = static_cast<std::size_t>(
    std::upper_bound(ys_.begin(), ys_.end(), x - reach_) - ys_.begin());
  const auto hi = static_cast<std::size_t>(
    std::lower_bound(ys_.begin(), ys_.end(), x + reach_) - ys_.begin());
  double cs = 0.0;
  if (hi < ys_.size()) {
    const auto full = static_cast<double>(ys_.size() - hi);
    const double centre = window_second(transform_, kernel_, h_, x, x + reach_);
    cs += gy_suffix_[hi] - full * transform_.g(x + reach_) + full * centre;
  }
  for (std::size_t i = lo; i < hi; ++i)
    cs += window_second(transform_, kernel_, h_, x, ys_[i]);
  cs /= static_cast<double>(ys_.size());
  check_finite(cs, "cumulative survival estimate");
  return cs;
}

double
TransformedEstimator::survival(double t) const
{
  return survival_x(x_of(t));
}

double
TransformedEstimator::cum_survival(double t, Variant variant) const
{
  const double x = x_of(t);
  return variant == Variant::first ? cum_first_x(x) : cum_second_x(x);
}

PointEstimate
TransformedEstimator::at(double t, Variant variant) const
{
  const double x = x_of(t);
  const double s = survival_x(x);
  if (!(s > 0.0))
    return finish(0.0, 0.0);
  return finish(s, variant == Variant::first ? cum_first_x(x) : cum_second_x(x));
}

PointEstimate
TransformedEstimator::lower_limit(Variant variant) const
{
  const double lower = transform_.support().lower;
  if (!std::isfinite(lower))
    fail(ErrorCode::domain, "boundary limits need a finite lower support end");
  if (variant == Variant::first && !first_ready_)
    fail(ErrorCode::invalid_argument,
         "estimator was prepared without the first variant");
  const double n = static_cast<double>(ys_.size());
  const double total = variant == Variant::first ? first_suffix_[0] : gy_suffix_[0];
  return finish(1.0, total / n - lower);
}

// ---------------------------------------------------------------------------

double
empirical_mrl(const Sample& sample, double t)
{
  return EmpiricalEstimator(sample).at(t).mrl;
}

PointEstimate
empirical_point(const Sample& sample, double t)
{
  return EmpiricalEstimator(sample).at(t);
}

PointEstimate
naive_kernel_curves(const Sample& sample, const Kernel& kernel, double h, double t)
{
  return NaiveKernelEstimator(sample, kernel, h).at(t);
}

double
t1_survival(const Sample& sample,
            const Transform& tr,
            const Kernel& kernel,
            double h,
            double t)
{
  return TransformedEstimator(sample, tr, kernel, h, false).survival(t);
}

double
t2_survival(const Sample& sample,
            const Transform& tr,
            const Kernel& kernel,
            double h,
            double t)
{
  return TransformedEstimator(sample, tr, kernel, h, false).survival(t);
}

double
t1_cum_survival(const Sample& sample,
                const Transform& tr,
                const Kernel& kernel,
                double h,
                double t)
{
  return TransformedEstimator(sample, tr, kernel, h, true).cum_survival(t, Variant::first);
}

double
t2_cum_survival(const Sample& sample,
                const Transform& tr,
                const Kernel& kernel,
                double h,
                double t)
{
  return TransformedEstimator(sample, tr, kernel, h, false).cum_survival(t, Variant::second);
}

PointEstimate
transformed_mrl(const Sample& sample,
                const Transform& tr,
                const Kernel& kernel,
                double h,
                double t,
                Variant variant)
{
  return TransformedEstimator(sample, tr, kernel, h, variant == Variant::first)
    .at(t, variant);
}

BoundaryLimits
boundary_limits(const Sample& sample, const Transform& tr, const Kernel& kernel, double h)
{
  const TransformedEstimator est(sample, tr, kernel, h, true);
  BoundaryLimits out;
  out.lower_first = est.lower_limit(Variant::first);
  out.lower_second = est.lower_limit(Variant::second);
  out.upper = PointEstimate{ 0.0, 0.0, 0.0, PointFlag::ok };
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template<class Eval>
CurveEstimate
fill_curve(std::span<const double> grid, Eval&& eval)
{
  CurveEstimate c;
  c.grid.assign(grid.begin(), grid.end());
  c.survival.resize(grid.size());
  c.cum_survival.resize(grid.size());
  c.mrl.resize(grid.size());
  c.flags.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    PointEstimate p;
    try {
      p = eval(grid[i]);
    } catch (const Error&) {
      p = PointEstimate{ 0.0, 0.0, 0.0, PointFlag::error };
    }
    c.survival[i] = p.survival;
    c.cum_survival[i] = p.cum_survival;
    c.mrl[i] = p.mrl;
    c.flags[i] = p.flag;
  }
  return c;
}

} // namespace

CurveEstimate
evaluate_curve(const EstimatorSpec& spec, const Sample& sample, std::span<const double> grid)
{
  spec.validate(sample);
  if (!std::is_sorted(grid.begin(), grid.end()))
    fail(ErrorCode::invalid_argument, "evaluation grid must be sorted ascending");

  switch (spec.method) {
    case Method::empirical: {
      const EmpiricalEstimator est(sample);
      return fill_curve(grid, [&](double t) { return est.at(t); });
    }
    case Method::naive_kernel: {
      const NaiveKernelEstimator est(sample, spec.kernel, spec.bandwidth);
      return fill_curve(grid, [&](double t) { return est.at(t); });
    }
    case Method::transformed1:
    case Method::transformed2: {
      const Variant v =
        spec.method == Method::transformed1 ? Variant::first : Variant::second;
      const TransformedEstimator est(sample, spec.transform, spec.kernel,
                                     spec.bandwidth, v == Variant::first);
      return fill_curve(grid, [&](double t) { return est.at(t, v); });
    }
  }
  fail(ErrorCode::invalid_argument, "unknown estimator method");
}

std::vector<double>
linear_grid(double lo, double hi, std::size_t points)
{
  if (points == 0)
    fail(ErrorCode::invalid_argument, "grid needs at least one point");
  if (!(hi >= lo))
    fail(ErrorCode::invalid_argument, "grid requires min <= max");
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

} // namespace mrl
