#pragma once

#include <span>
#include <vector>

namespace radium {

struct Percentiles {
  double p5 = 0.0;
  double median = 0.0;
  double p95 = 0.0;
};

/// Linear interpolation between order statistics (position p (n - 1)).
/// `sorted` must be ascending and non-empty.
double percentile_sorted(std::span<const double> sorted, double p);

/// Sorts a copy; order of the input does not matter.
double percentile(std::vector<double> values, double p);
Percentiles summarize(std::vector<double> values);

/// Standard error of a binomial frequency estimate.
double binomial_sigma(double p, std::size_t n);

}  // namespace radium
