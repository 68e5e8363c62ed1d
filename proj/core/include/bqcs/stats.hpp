#pragma once

#include <span>

namespace bqcs {

double mean(std::span<const double> xs);

/// Quantile with linear interpolation between order statistics (the common
/// "type 7" rule). q in [0, 1]; empty input is a domain_error.
double quantile(std::span<const double> xs, double q);

double median(std::span<const double> xs);

}  // namespace bqcs
