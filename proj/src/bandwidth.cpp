#include "mrl/bandwidth.hpp"

#include "mrl/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mrl {

double
kernel_self_convolution(const Kernel& kernel, double u)
{
  const double a = std::abs(u);
  if (kernel.family() == KernelFamily::epanechnikov) {
    if (a >= 2.0)
      return 0.0;
    const double c = 2.0 - a;
    return 3.0 / 160.0 * c * c * c * (a * a + 6.0 * a + 4.0);
  }
  return std::exp(-0.25 * u * u) * 0.5 * std::numbers::inv_sqrtpi;
}

LscvResult
lscv_profile(std::span<const double> y_in, const Kernel& kernel)
{
  const std::size_t n = y_in.size();
  if (n < 4)
    fail(ErrorCode::selection, "bandwidth selection needs at least 4 observations");
  std::vector<double> y(y_in.begin(), y_in.end());
  std::sort(y.begin(), y.end());
  for (double v : y)
    if (!std::isfinite(v))
      fail(ErrorCode::selection, "bandwidth selection got a non-finite value");

  const double nd = static_cast<double>(n);
  double mean = 0.0;
  for (double v : y)
    mean += v;
  mean /= nd;
  double ss = 0.0;
  for (double v : y)
    ss += (v - mean) * (v - mean);
  const double sigma = std::sqrt(ss / (nd - 1.0));
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    fail(ErrorCode::selection, "bandwidth selection on a sample with zero spread");

  constexpr std::size_t points = 40;
  const double h_min = 0.05 * sigma * std::pow(nd, -0.2);
  const double h_max = 3.0 * sigma;

  LscvResult out;
  out.grid.resize(points);
  out.scores.resize(points);
  // Pairs beyond this many bandwidths contribute nothing (compact) or
  // below 1e-15 relative (Gaussian).
  const double cutoff = kernel.compact() ? 2.0 : 12.0;
  const double kk0 = kernel_self_convolution(kernel, 0.0);

  for (std::size_t k = 0; k < points; ++k) {
    const double h =
      h_min * std::pow(h_max / h_min, static_cast<double>(k) / (points - 1.0));
    out.grid[k] = h;
    double sum_kk = 0.0;
    double sum_k = 0.0;
    const double reach = cutoff * h;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = y[j] - y[i];
        if (d >= reach)
          break;
        const double u = d / h;
        sum_kk += kernel_self_convolution(kernel, u);
        sum_k += kernel.density(u);
      }
    }
    const double int_f2 = (nd * kk0 + 2.0 * sum_kk) / (nd * nd * h);
    const double loo = 2.0 * (2.0 * sum_k) / (nd * (nd - 1.0) * h);
    out.scores[k] = int_f2 - loo;
  }

  std::size_t best = points;
  for (std::size_t k = 0; k < points; ++k) {
    if (!std::isfinite(out.scores[k]))
      continue;
    if (best == points || out.scores[k] < out.scores[best])
      best = k;
  }
  if (best == points)
    fail(ErrorCode::selection, "cross-validation criterion is non-finite on the whole grid");
  out.bandwidth = out.grid[best];
  return out;
}

double
select_bandwidth_lscv(const Sample& sample, const Transform& transform, const Kernel& kernel)
{
  std::vector<double> y;
  y.reserve(sample.size());
  for (double v : sample.values())
    y.push_back(transform.g_inv(v));
  return lscv_profile(y, kernel).bandwidth;
}

} // namespace mrl
