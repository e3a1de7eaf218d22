#include "mrl/kernel.hpp"

#include "mrl/error.hpp"

#include <numbers>

namespace mrl {

namespace {

KernelConstants
constants_for(KernelFamily family)
{
  switch (family) {
    case KernelFamily::epanechnikov:
      // ∫ V W = 1 - ∫ W² with W = 1/2 + (3x - x³)/4 on [-1, 1].
      return { 0.2, 9.0 / 35.0 };
    case KernelFamily::gaussian:
      // ∫ Φ (1 - Φ) = 1/√π.
      return { 1.0, std::numbers::inv_sqrtpi };
  }
  return { 0.0, 0.0 };
}

} // namespace

Kernel::Kernel(KernelFamily family)
  : family_(family)
  , constants_(constants_for(family))
{}

std::string_view
Kernel::name() const noexcept
{
  return family_ == KernelFamily::epanechnikov ? "epanechnikov" : "gaussian";
}

KernelValues
kernel_eval(const Kernel& kernel, double x)
{
  return kernel.eval(x);
}

KernelConstants
kernel_constants(const Kernel& kernel)
{
  return kernel.constants();
}

KernelFamily
parse_kernel_family(std::string_view name)
{
  if (name == "epanechnikov")
    return KernelFamily::epanechnikov;
  if (name == "gaussian")
    return KernelFamily::gaussian;
  fail(ErrorCode::invalid_argument,
       "unknown kernel '" + std::string(name) +
         "' (expected epanechnikov or gaussian)");
}

} // namespace mrl
