#include "mrl/distributions.hpp"

#include "mrl/error.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace mrl {

namespace bm = boost::math;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

SupportInterval
support_for(DistributionFamily f, double p1, double p2)
{
  switch (f) {
    case DistributionFamily::uniform:
      return SupportInterval(p1, p2);
    case DistributionFamily::beta:
      return SupportInterval(0.0, 1.0);
    default:
      return SupportInterval(0.0, inf);
  }
}

void
require_positive(double v, const char* what)
{
  if (!(v > 0.0) || !std::isfinite(v))
    fail(ErrorCode::invalid_argument, std::string(what) + " must be positive");
}

} // namespace

TrueDistribution::TrueDistribution(DistributionFamily family, double p1, double p2)
  : family_(family)
  , p1_(p1)
  , p2_(p2)
  , support_(support_for(family, p1, p2))
{
  switch (family_) {
    case DistributionFamily::uniform:
      mean_ = 0.5 * (p1 + p2);
      variance_ = (p2 - p1) * (p2 - p1) / 12.0;
      break;
    case DistributionFamily::beta: {
      const double s = p1 + p2;
      mean_ = p1 / s;
      variance_ = p1 * p2 / (s * s * (s + 1.0));
      break;
    }
    case DistributionFamily::gamma:
      mean_ = p1 * p2;
      variance_ = p1 * p2 * p2;
      break;
    case DistributionFamily::weibull: {
      const double g1 = std::tgamma(1.0 + 1.0 / p1);
      const double g2 = std::tgamma(1.0 + 2.0 / p1);
      mean_ = p2 * g1;
      variance_ = p2 * p2 * (g2 - g1 * g1);
      break;
    }
    case DistributionFamily::absnormal:
      mean_ = p1 * std::sqrt(2.0 / std::numbers::pi);
      variance_ = p1 * p1 * (1.0 - 2.0 / std::numbers::pi);
      break;
    case DistributionFamily::exponential:
      mean_ = 1.0 / p1;
      variance_ = 1.0 / (p1 * p1);
      break;
  }
}

TrueDistribution
TrueDistribution::uniform(double a, double b)
{
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    fail(ErrorCode::invalid_argument, "uniform requires finite a < b");
  return TrueDistribution(DistributionFamily::uniform, a, b);
}

TrueDistribution
TrueDistribution::beta(double alpha, double beta)
{
  require_positive(alpha, "beta alpha");
  require_positive(beta, "beta beta");
  return TrueDistribution(DistributionFamily::beta, alpha, beta);
}

TrueDistribution
TrueDistribution::gamma(double shape, double scale)
{
  require_positive(shape, "gamma shape");
  require_positive(scale, "gamma scale");
  return TrueDistribution(DistributionFamily::gamma, shape, scale);
}

TrueDistribution
TrueDistribution::weibull(double shape, double scale)
{
  require_positive(shape, "weibull shape");
  require_positive(scale, "weibull scale");
  return TrueDistribution(DistributionFamily::weibull, shape, scale);
}

TrueDistribution
TrueDistribution::absnormal(double sigma)
{
  require_positive(sigma, "absnormal sigma");
  return TrueDistribution(DistributionFamily::absnormal, sigma, 0.0);
}

TrueDistribution
TrueDistribution::exponential(double rate)
{
  require_positive(rate, "exponential rate");
  return TrueDistribution(DistributionFamily::exponential, rate, 0.0);
}

TrueDistribution
TrueDistribution::parse(std::string_view text)
{
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  const auto colon = text.find(':');
  const std::string_view family = trim(text.substr(0, colon));
  std::vector<double> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      double v = 0.0;
      const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
      if (res.ec != std::errc() || res.ptr != item.data() + item.size())
        fail(ErrorCode::invalid_argument,
             "bad distribution parameter '" + std::string(item) + "'");
      params.push_back(v);
      if (comma == std::string_view::npos)
        break;
      rest.remove_prefix(comma + 1);
    }
  }
  auto need = [&](std::size_t k) {
    if (params.size() != k)
      fail(ErrorCode::invalid_argument,
           "distribution '" + std::string(family) + "' takes " +
             std::to_string(k) + " parameter(s)");
  };
  if (family == "uniform") {
    need(2);
    return uniform(params[0], params[1]);
  }
  if (family == "beta") {
    need(2);
    return beta(params[0], params[1]);
  }
  if (family == "gamma") {
    need(2);
    return gamma(params[0], params[1]);
  }
  if (family == "weibull") {
    need(2);
    return weibull(params[0], params[1]);
  }
  if (family == "absnormal") {
    if (params.empty())
      return absnormal(1.0);
    need(1);
    return absnormal(params[0]);
  }
  if (family == "exponential" || family == "exp") {
    need(1);
    return exponential(params[0]);
  }
  fail(ErrorCode::invalid_argument, "unknown distribution '" + std::string(family) + "'");
}

std::string
TrueDistribution::name() const
{
  std::ostringstream os;
  os.precision(12);
  switch (family_) {
    case DistributionFamily::uniform:
      os << "uniform:" << p1_ << ',' << p2_;
      break;
    case DistributionFamily::beta:
      os << "beta:" << p1_ << ',' << p2_;
      break;
    case DistributionFamily::gamma:
      os << "gamma:" << p1_ << ',' << p2_;
      break;
    case DistributionFamily::weibull:
      os << "weibull:" << p1_ << ',' << p2_;
      break;
    case DistributionFamily::absnormal:
      os << "absnormal:" << p1_;
      break;
    case DistributionFamily::exponential:
      os << "exponential:" << p1_;
      break;
  }
  return os.str();
}

double
TrueDistribution::sd() const
{
  return std::sqrt(variance_);
}

double
TrueDistribution::pdf(double t) const
{
  if (!(t > support_.lower) || !(t < support_.upper))
    return 0.0;
  switch (family_) {
    case DistributionFamily::uniform:
      return 1.0 / (p2_ - p1_);
    case DistributionFamily::beta:
      return bm::ibeta_derivative(p1_, p2_, t);
    case DistributionFamily::gamma:
      return bm::gamma_p_derivative(p1_, t / p2_) / p2_;
    case DistributionFamily::weibull: {
      const double z = t / p2_;
      return p1_ / p2_ * std::pow(z, p1_ - 1.0) * std::exp(-std::pow(z, p1_));
    }
    case DistributionFamily::absnormal:
      return 2.0 * normal_pdf(t / p1_) / p1_;
    case DistributionFamily::exponential:
      return p1_ * std::exp(-p1_ * t);
  }
  return 0.0;
}

double
TrueDistribution::pdf_derivative(double t) const
{
  if (!(t > support_.lower) || !(t < support_.upper))
    return 0.0;
  const double f = pdf(t);
  switch (family_) {
    case DistributionFamily::uniform:
      return 0.0;
    case DistributionFamily::beta:
      return f * ((p1_ - 1.0) / t - (p2_ - 1.0) / (1.0 - t));
    case DistributionFamily::gamma:
      return f * ((p1_ - 1.0) / t - 1.0 / p2_);
    case DistributionFamily::weibull:
      return f * ((p1_ - 1.0) / t - p1_ * std::pow(t, p1_ - 1.0) / std::pow(p2_, p1_));
    case DistributionFamily::absnormal:
      return -f * t / (p1_ * p1_);
    case DistributionFamily::exponential:
      return -p1_ * f;
  }
  return 0.0;
}

double
TrueDistribution::partial_moment(int r, double t) const
{
  if (r < 0 || r > 2)
    fail(ErrorCode::invalid_argument, "partial moments are available for r = 0, 1, 2");
  const double rd = static_cast<double>(r);
  if (t >= support_.upper)
    return 0.0;
  switch (family_) {
    case DistributionFamily::uniform: {
      const double a = p1_;
      const double b = p2_;
      const double lo = std::max(t, a);
      return (std::pow(b, rd + 1.0) - std::pow(lo, rd + 1.0)) / ((rd + 1.0) * (b - a));
    }
    case DistributionFamily::beta: {
      const double x = std::clamp(t, 0.0, 1.0);
      double ratio = 1.0;
      for (int i = 0; i < r; ++i)
        ratio *= (p1_ + i) / (p1_ + p2_ + i);
      return ratio * bm::ibetac(p1_ + rd, p2_, x);
    }
    case DistributionFamily::gamma: {
      const double x = std::max(t, 0.0) / p2_;
      double ratio = 1.0;
      for (int i = 0; i < r; ++i)
        ratio *= (p1_ + i) * p2_;
      return ratio * bm::gamma_q(p1_ + rd, x);
    }
    case DistributionFamily::weibull: {
      const double x = std::pow(std::max(t, 0.0) / p2_, p1_);
      const double a = 1.0 + rd / p1_;
      return std::pow(p2_, rd) * std::tgamma(a) * bm::gamma_q(a, x);
    }
    case DistributionFamily::absnormal: {
      const double s = p1_;
      const double z = std::max(t, 0.0) / s;
      const double tail = 2.0 * normal_cdf(-z);
      if (r == 0)
        return tail;
      if (r == 1)
        return 2.0 * s * normal_pdf(z);
      return s * s * (2.0 * z * normal_pdf(z) + tail);
    }
    case DistributionFamily::exponential: {
      const double x = std::max(t, 0.0);
      const double lam = p1_;
      const double e = std::exp(-lam * x);
      if (r == 0)
        return e;
      if (r == 1)
        return e * (x + 1.0 / lam);
      return e * (x * x + 2.0 * x / lam + 2.0 / (lam * lam));
    }
  }
  return 0.0;
}

double
TrueDistribution::survival(double t) const
{
  if (t <= support_.lower)
    return 1.0;
  if (t >= support_.upper)
    return 0.0;
  switch (family_) {
    case DistributionFamily::weibull:
      return std::exp(-std::pow(t / p2_, p1_));
    case DistributionFamily::exponential:
      return std::exp(-p1_ * t);
    default:
      return partial_moment(0, t);
  }
}

double
TrueDistribution::cum_survival(double t) const
{
  if (t >= support_.upper)
    return 0.0;
  switch (family_) {
    case DistributionFamily::exponential:
      return survival(std::max(t, 0.0)) / p1_ + std::max(0.0 - t, 0.0);
    case DistributionFamily::uniform: {
      const double x = std::max(t, p1_);
      return (p2_ - x) * (p2_ - x) / (2.0 * (p2_ - p1_)) + (x - t);
    }
    default:
      return partial_moment(1, t) - t * partial_moment(0, t);
  }
}

double
TrueDistribution::double_cum_survival(double t) const
{
  if (t >= support_.upper)
    return 0.0;
  switch (family_) {
    case DistributionFamily::exponential:
      if (t >= 0.0)
        return survival(t) / (p1_ * p1_);
      break;
    case DistributionFamily::uniform:
      if (t >= p1_)
        return std::pow(p2_ - t, 3.0) / (6.0 * (p2_ - p1_));
      break;
    default:
      break;
  }
  return 0.5 * (partial_moment(2, t) - 2.0 * t * partial_moment(1, t) +
                t * t * partial_moment(0, t));
}

double
TrueDistribution::mrl(double t) const
{
  const double s = survival(t);
  if (!(s > 0.0))
    return 0.0;
  if (family_ == DistributionFamily::exponential && t >= 0.0)
    return 1.0 / p1_;
  return cum_survival(t) / s;
}

double
TrueDistribution::draw(std::mt19937_64& rng) const
{
  for (;;) {
    double x = 0.0;
    switch (family_) {
      case DistributionFamily::uniform:
        x = std::uniform_real_distribution<double>(p1_, p2_)(rng);
        break;
      case DistributionFamily::beta: {
        const double a = std::gamma_distribution<double>(p1_, 1.0)(rng);
        const double b = std::gamma_distribution<double>(p2_, 1.0)(rng);
        x = a / (a + b);
        break;
      }
      case DistributionFamily::gamma:
        x = std::gamma_distribution<double>(p1_, p2_)(rng);
        break;
      case DistributionFamily::weibull:
        x = std::weibull_distribution<double>(p1_, p2_)(rng);
        break;
      case DistributionFamily::absnormal:
        x = std::abs(std::normal_distribution<double>(0.0, p1_)(rng));
        break;
      case DistributionFamily::exponential:
        x = std::exponential_distribution<double>(p1_)(rng);
        break;
    }
    if (support_.interior(x))
      return x;
  }
}

} // namespace mrl
