#include "mrl/sample.hpp"

#include "mrl/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mrl {

Sample::Sample(std::vector<double> values, SupportInterval support)
  : values_(std::move(values))
  , support_(support)
{
  if (values_.empty())
    fail(ErrorCode::data, "sample is empty");
  if (!support_.lower_finite() && !support_.upper_finite())
    fail(ErrorCode::invalid_argument,
         "sample support must be bounded or half-bounded");
  for (double v : values_) {
    if (!std::isfinite(v))
      fail(ErrorCode::data, "sample contains a non-finite value");
    if (!support_.interior(v))
      fail(ErrorCode::data,
           "observation " + std::to_string(v) + " is not inside the support (" +
             std::to_string(support_.lower) + ", " +
             std::to_string(support_.upper) + ")");
  }
  std::sort(values_.begin(), values_.end());

  // Two-pass moments.
  const double n = static_cast<double>(values_.size());
  double sum = 0.0;
  for (double v : values_)
    sum += v;
  mean_ = sum / n;
  if (values_.size() > 1) {
    double ss = 0.0;
    for (double v : values_)
      ss += (v - mean_) * (v - mean_);
    stddev_ = std::sqrt(ss / (n - 1.0));
  }
}

} // namespace mrl
