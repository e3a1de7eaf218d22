#pragma once

#include "mrl/transform.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mrl {

//! Validated i.i.d. observations, stored sorted ascending. Every value lies
//! strictly inside the support.
class Sample
{
public:
  Sample(std::vector<double> values, SupportInterval support);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const SupportInterval& support() const noexcept { return support_; }

  double mean() const noexcept { return mean_; }
  //! Standard deviation with the n − 1 divisor; 0 when n = 1.
  double stddev() const noexcept { return stddev_; }
  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }

private:
  std::vector<double> values_;
  SupportInterval support_;
  double mean_ = 0.0;
  double stddev_ = 0.0;
};

} // namespace mrl
