#include "bqcs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bqcs/errors.hpp"

namespace bqcs {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw domain_error("mean of empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double quantile(std::span<const double> xs, double q) {
  if (xs.empty()) throw domain_error("quantile of empty sample");
  if (q < 0.0 || q > 1.0) throw domain_error("quantile level outside [0, 1]");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - std::floor(pos);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> xs) { return quantile(xs, 0.5); }

}  // namespace bqcs
