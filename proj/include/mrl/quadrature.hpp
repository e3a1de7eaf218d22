#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

namespace mrl::quad {

//! Nodes and weights of an N-point Gauss-Legendre rule on [-1, 1].
template<std::size_t N>
struct GaussLegendreRule
{
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendreRule()
  {
    const std::size_t m = (N + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
      double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                          (static_cast<double>(N) + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = 1.0;
        double p2 = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
          const double p3 = p2;
          p2 = p1;
          const double jd = static_cast<double>(j);
          p1 = ((2.0 * jd + 1.0) * z * p2 - jd * p3) / (jd + 1.0);
        }
        pp = static_cast<double>(N) * (z * p1 - p2) / (z * z - 1.0);
        const double z1 = z;
        z = z1 - p1 / pp;
        if (std::abs(z - z1) < 1e-15)
          break;
      }
      nodes[i] = -z;
      nodes[N - 1 - i] = z;
      weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
      weights[N - 1 - i] = weights[i];
    }
  }
};

template<std::size_t N>
const GaussLegendreRule<N>&
gauss_legendre_rule()
{
  static const GaussLegendreRule<N> rule;
  return rule;
}

//! Fixed-order Gauss-Legendre integral of f over [a, b].
template<std::size_t N = 32, class F>
double
gauss_legendre(F&& f, double a, double b)
{
  if (!(b > a))
    return 0.0;
  const auto& rule = gauss_legendre_rule<N>();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

//! Composite Gauss-Legendre over [a, b] with panels no wider than max_width.
template<std::size_t N = 32, class F>
double
gauss_legendre_composite(F&& f, double a, double b, double max_width)
{
  if (!(b > a))
    return 0.0;
  const auto panels =
    static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / max_width)));
  const double width = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double hi = (p + 1 == panels) ? b : lo + width;
    sum += gauss_legendre<N>(f, lo, hi);
  }
  return sum;
}

} // namespace mrl::quad
