#pragma once

#include "mrl/distributions.hpp"
#include "mrl/kernel.hpp"
#include "mrl/transform.hpp"

#include <cstddef>
#include <string_view>

namespace mrl {

//! The five leading-order coefficient functions at one t.
struct BCoefficients
{
  double b1; // g''(g⁻¹t) f(t) + g'(g⁻¹t)² f'(t)
  double b2; // g'(g⁻¹t)² f(t) + ∫_{g⁻¹t}^∞ g''(x) g'(x) f(g(x)) dx
  double b3; // g'(g⁻¹t)² f(t) − g''(g⁻¹t) S(t)
  double b4; // 2 S̄(t) − S(t) m(t)²
  double b5; // g'(g⁻¹t) f(t) m(t)²
};

BCoefficients eval_b(const TrueDistribution& dist, const Transform& tr, double t);

//! b2 through −∫_t^{ω''} b1(s) ds; independent route used to cross-check
//! the integral definition.
double b2_from_b1(const TrueDistribution& dist, const Transform& tr, double t);

enum class TheoryTarget
{
  survival,            // S̃₁ = S̃₂
  cum_survival_first,  // 𝕊̃₁
  cum_survival_second, // 𝕊̃₂
  mrl_first,           // m̃₁
  mrl_second           // m̃₂
};

TheoryTarget parse_theory_target(std::string_view name);

struct BiasVariance
{
  double bias;
  double variance;
  double covariance; // Cov[𝕊̃, S̃], identical for both sets
};

//! Leading-order bias, variance and covariance of a transformed estimator.
BiasVariance theoretical_bias_variance(const TrueDistribution& dist,
                                       const Transform& tr,
                                       const Kernel& kernel,
                                       double h,
                                       std::size_t n,
                                       double t,
                                       TheoryTarget target);

} // namespace mrl
