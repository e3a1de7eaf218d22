#pragma once

#include "mrl/kernel.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace mrl {

//! The support Ω = (lower, upper) of a distribution. Either end may be
//! infinite; data supports additionally require at least one finite end.
struct SupportInterval
{
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  SupportInterval() = default;
  SupportInterval(double lo, double hi);

  static SupportInterval real_line();

  bool lower_finite() const noexcept { return std::isfinite(lower); }
  bool upper_finite() const noexcept { return std::isfinite(upper); }
  bool bounded() const noexcept { return lower_finite() && upper_finite(); }

  //! Closed membership; finite end points count as inside.
  bool contains(double t) const noexcept
  {
    return t >= lower && t <= upper && !std::isnan(t);
  }
  bool interior(double t) const noexcept { return t > lower && t < upper; }

  friend bool operator==(const SupportInterval&, const SupportInterval&) = default;
};

enum class TransformKind
{
  identity,
  exp,
  probit,
  custom
};

//! Standard normal helpers shared by the probit transform and the
//! distribution code.
double normal_pdf(double y) noexcept;
double normal_cdf(double y) noexcept;
//! Φ⁻¹(p): rational approximation refined by one Newton step.
double normal_quantile(double p);

//! A strictly increasing bijection g: ℝ → Ω together with g', g'' and g⁻¹.
class Transform
{
public:
  using Fn = std::function<double(double)>;

  static Transform identity();
  //! g(y) = lower + eʸ on Ω = (lower, ∞).
  static Transform exp(double lower);
  //! g(y) = lower + (upper − lower)·Φ(y) on Ω = (lower, upper).
  static Transform probit(double lower, double upper);
  static Transform custom(SupportInterval support,
                          Fn g,
                          Fn g_inv,
                          Fn g_d1,
                          Fn g_d2,
                          std::string name = "custom");

  TransformKind kind() const noexcept { return kind_; }
  const SupportInterval& support() const noexcept { return support_; }
  const std::string& name() const noexcept { return name_; }

  double g(double y) const
  {
    switch (kind_) {
      case TransformKind::identity:
        return y;
      case TransformKind::exp:
        return support_.lower + std::exp(y);
      case TransformKind::probit:
        return y <= 0.0 ? support_.lower + span_ * normal_cdf(y)
                        : support_.upper - span_ * normal_cdf(-y);
      case TransformKind::custom:
        break;
    }
    return g_(y);
  }

  double d1(double y) const
  {
    switch (kind_) {
      case TransformKind::identity:
        return 1.0;
      case TransformKind::exp:
        return std::exp(y);
      case TransformKind::probit:
        return span_ * normal_pdf(y);
      case TransformKind::custom:
        break;
    }
    return d1_(y);
  }

  double d2(double y) const
  {
    switch (kind_) {
      case TransformKind::identity:
        return 0.0;
      case TransformKind::exp:
        return std::exp(y);
      case TransformKind::probit:
        return -span_ * y * normal_pdf(y);
      case TransformKind::custom:
        break;
    }
    return d2_(y);
  }

  //! g⁻¹(t) for t strictly inside Ω; throws a domain error otherwise.
  double g_inv(double t) const;

private:
  Transform(TransformKind kind, SupportInterval support, std::string name);

  TransformKind kind_;
  SupportInterval support_;
  double span_ = 0.0;
  std::string name_;
  Fn g_, g_inv_, d1_, d2_;
};

Transform make_exp_transform(double lower);
Transform make_probit_transform(double lower, double upper);

struct TransformCheck
{
  std::string name;
  bool passed;
  std::string detail;
};

//! Numerical sanity checks of a transform: monotonicity, round trip,
//! derivative consistency against central differences, end-point limits and
//! finiteness of ∫ g'(u y) K(y) dy near u = 0. Never throws.
std::vector<TransformCheck> validate_transform(const Transform& tr,
                                               const Kernel& kernel);

//! "log" → exp transform, "probit", "identity"; the support supplies the
//! end points.
Transform make_transform(std::string_view name, const SupportInterval& support);

//! log for half lines, probit for bounded intervals.
Transform default_transform(const SupportInterval& support);

} // namespace mrl
