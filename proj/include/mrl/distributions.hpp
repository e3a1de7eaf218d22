#pragma once

#include "mrl/transform.hpp"

#include <random>
#include <string>
#include <string_view>

namespace mrl {

enum class DistributionFamily
{
  uniform,     // (a, b)
  beta,        // (alpha, beta) on (0, 1)
  gamma,       // (shape k, scale theta)
  weibull,     // (shape k, scale lambda)
  absnormal,   // |N(0, sigma²)|
  exponential  // (rate)
};

//! A known lifetime distribution with closed-form survival quantities.
//! 𝕊(t) = ∫_t S and S̄(t) = ∫_t 𝕊 come from the partial moments
//! E[X^r 1{X > t}], r = 0, 1, 2.
class TrueDistribution
{
public:
  static TrueDistribution uniform(double a, double b);
  static TrueDistribution beta(double alpha, double beta);
  static TrueDistribution gamma(double shape, double scale);
  static TrueDistribution weibull(double shape, double scale);
  static TrueDistribution absnormal(double sigma = 1.0);
  static TrueDistribution exponential(double rate);

  //! "uniform:0,1", "beta:3,2", "gamma:2,3", "weibull:3,2", "absnormal",
  //! "absnormal:2", "exponential:0.5" (rate).
  static TrueDistribution parse(std::string_view text);

  DistributionFamily family() const noexcept { return family_; }
  double param1() const noexcept { return p1_; }
  double param2() const noexcept { return p2_; }
  std::string name() const;
  const SupportInterval& support() const noexcept { return support_; }

  double pdf(double t) const;
  double pdf_derivative(double t) const;
  double cdf(double t) const { return 1.0 - survival(t); }
  double survival(double t) const;
  double cum_survival(double t) const;
  double double_cum_survival(double t) const;
  //! 𝕊/S, with 0 where S = 0.
  double mrl(double t) const;

  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  double sd() const;

  double partial_moment(int r, double t) const;

  //! One draw strictly inside the support.
  double draw(std::mt19937_64& rng) const;

private:
  TrueDistribution(DistributionFamily family, double p1, double p2);

  DistributionFamily family_;
  double p1_;
  double p2_;
  SupportInterval support_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

} // namespace mrl
