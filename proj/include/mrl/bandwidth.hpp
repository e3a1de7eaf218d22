#pragma once

#include "mrl/kernel.hpp"
#include "mrl/sample.hpp"
#include "mrl/transform.hpp"

#include <span>
#include <vector>

namespace mrl {

struct LscvResult
{
  double bandwidth;
  std::vector<double> grid;   // candidate bandwidths, ascending
  std::vector<double> scores; // LSCV(h) per candidate
};

//! Least-squares cross-validation for a density of already-transformed
//! values y: minimise ∫ f̂² − (2/n) Σ f̂₋ᵢ(yᵢ) over 40 log-spaced bandwidths
//! in [0.05 σ̂ n^{-1/5}, 3 σ̂]. ∫ f̂² uses the exact self-convolution K∗K.
LscvResult lscv_profile(std::span<const double> y, const Kernel& kernel);

//! LSCV on the transformed scale y = g⁻¹(X).
double select_bandwidth_lscv(const Sample& sample,
                             const Transform& transform,
                             const Kernel& kernel);

//! K∗K(u) = ∫ K(v) K(u − v) dv.
double kernel_self_convolution(const Kernel& kernel, double u);

} // namespace mrl
