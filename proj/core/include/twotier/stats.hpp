#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace twotier {

/// Kolmogorov-Smirnov distance between a sample and a reference
/// distribution function (the sample is copied and sorted).
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

/// Wilson score interval for a binomial proportion.
struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z = 1.959963984540054);

/// Fraction of (sorted) samples strictly above `level`.
double empirical_ccdf(const std::vector<double>& sorted, double level);

/// Linear-interpolated sample quantile of a sorted vector.
double sample_quantile(const std::vector<double>& sorted, double prob);

}  // namespace twotier
