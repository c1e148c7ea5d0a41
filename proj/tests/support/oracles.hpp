#pragma once

// Deliberately naive reference implementations used to check the library.

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

// G = Σ_i Σ_j w_i w_j |x_i - x_j| / (2 W Σ w x).
inline double pairwise_gini(const std::vector<double>& x, const std::vector<double>& w) {
  long double num = 0.0L, total_w = 0.0L, total_wx = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total_w += w[i];
    total_wx += static_cast<long double>(w[i]) * x[i];
    for (std::size_t j = 0; j < x.size(); ++j)
      num += static_cast<long double>(w[i]) * w[j] * std::fabs(static_cast<long double>(x[i]) - x[j]);
  }
  return static_cast<double>(num / (2.0L * total_w * total_wx));
}

// Marginal-rate tax evaluated band by band in centavos; rates as given.
inline std::int64_t schedule_tax(const std::vector<std::pair<std::int64_t, double>>& bands, std::optional<std::int64_t> cap,
                                 std::int64_t base) {
  if (cap && base > *cap) base = *cap;
  long double tax = 0.0L;
  for (std::size_t k = 0; k < bands.size(); ++k) {
    const std::int64_t lo = bands[k].first;
    const std::int64_t hi = k + 1 < bands.size() ? bands[k + 1].first : base;
    if (base <= lo) break;
    tax += static_cast<long double>(std::min(base, hi) - lo) * bands[k].second;
  }
  return static_cast<std::int64_t>(std::floor(tax + 0.5L));
}

// Share of weight with income strictly below the line.
inline double headcount(const std::vector<double>& x, const std::vector<double>& w, double line) {
  double poor = 0.0, total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += w[i];
    if (x[i] < line) poor += w[i];
  }
  return poor / total;
}

}  // namespace oracle
