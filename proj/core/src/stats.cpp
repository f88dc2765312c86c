#include "twotier/stats.hpp"

#include <algorithm>
#include <cmath>

#include "twotier/errors.hpp"

namespace twotier {

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw InsufficientSamples("ks_statistic: empty sample");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    worst = std::max(worst, std::abs(f - i / n));
    worst = std::max(worst, std::abs((i + 1) / n - f));
  }
  return worst;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z) {
  if (trials == 0 || successes > trials) {
    throw DomainError("wilson_interval: bad counts");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double empirical_ccdf(const std::vector<double>& sorted, double level) {
  if (sorted.empty()) {
    throw InsufficientSamples("empirical_ccdf: empty sample");
  }
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), level);
  return static_cast<double>(sorted.end() - it) / sorted.size();
}

double sample_quantile(const std::vector<double>& sorted, double prob) {
  if (sorted.empty()) {
    throw InsufficientSamples("sample_quantile: empty sample");
  }
  if (prob < 0.0 || prob > 1.0) {
    throw DomainError("sample_quantile: probability outside [0, 1]");
  }
  const double pos = prob * (sorted.size() - 1);
  const std::size_t k = static_cast<std::size_t>(pos);
  if (k + 1 >= sorted.size()) return sorted.back();
  const double t = pos - k;
  return sorted[k] + t * (sorted[k + 1] - sorted[k]);
}

}  // namespace twotier
