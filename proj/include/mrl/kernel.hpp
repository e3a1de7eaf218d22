#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace mrl {

enum class KernelFamily
{
  epanechnikov,
  gaussian
};

//! Values of a kernel and its three derived functionals at one point:
//! density K, cumulative W, survival V and integrated survival 𝕍(x) = ∫_x^∞ V.
struct KernelValues
{
  double density;
  double cumulative;
  double survival;
  double integrated_survival;
};

struct KernelConstants
{
  double mu2; // ∫ y² K(y) dy
  double rho; // ∫ V(y) W(y) dy
};

//! Symmetric second-order kernel. Immutable; evaluation is inline because
//! it sits in every estimator's inner loop.
class Kernel
{
public:
  explicit Kernel(KernelFamily family = KernelFamily::epanechnikov);

  KernelFamily family() const noexcept { return family_; }
  std::string_view name() const noexcept;

  const KernelConstants& constants() const noexcept { return constants_; }
  double mu2() const noexcept { return constants_.mu2; }
  double rho() const noexcept { return constants_.rho; }

  //! Half-width of the region where V is neither 0 nor 1. The Gaussian
  //! kernel is truncated at ±8 (discarded mass below 1e-15).
  double radius() const noexcept
  {
    return family_ == KernelFamily::epanechnikov ? 1.0 : 8.0;
  }
  bool compact() const noexcept { return family_ == KernelFamily::epanechnikov; }

  double density(double x) const noexcept
  {
    if (family_ == KernelFamily::epanechnikov)
      return std::abs(x) < 1.0 ? 0.75 * (1.0 - x * x) : 0.0;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
  }

  double cumulative(double x) const noexcept
  {
    if (family_ == KernelFamily::epanechnikov) {
      if (x <= -1.0)
        return 0.0;
      if (x >= 1.0)
        return 1.0;
      return 0.5 + x * (0.75 - 0.25 * x * x);
    }
    return 0.5 * std::erfc(-x * inv_sqrt2);
  }

  double survival(double x) const noexcept
  {
    if (family_ == KernelFamily::epanechnikov) {
      if (x <= -1.0)
        return 1.0;
      if (x >= 1.0)
        return 0.0;
      return 0.5 - x * (0.75 - 0.25 * x * x);
    }
    return 0.5 * std::erfc(x * inv_sqrt2);
  }

  double integrated_survival(double x) const noexcept
  {
    if (family_ == KernelFamily::epanechnikov) {
      if (x <= -1.0)
        return -x;
      if (x >= 1.0)
        return 0.0;
      const double x2 = x * x;
      return 0.1875 - 0.5 * x + 0.375 * x2 - 0.0625 * x2 * x2;
    }
    return density(x) - x * survival(x);
  }

  KernelValues eval(double x) const noexcept
  {
    return { density(x), cumulative(x), survival(x), integrated_survival(x) };
  }

  friend bool operator==(const Kernel& a, const Kernel& b)
  {
    return a.family_ == b.family_;
  }

private:
  static constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  static constexpr double inv_sqrt_2pi =
    std::numbers::inv_sqrtpi / std::numbers::sqrt2;

  KernelFamily family_;
  KernelConstants constants_;
};

KernelValues kernel_eval(const Kernel& kernel, double x);
KernelConstants kernel_constants(const Kernel& kernel);

KernelFamily parse_kernel_family(std::string_view name);

} // namespace mrl
