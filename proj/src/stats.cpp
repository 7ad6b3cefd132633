#include <vgreeks/stats.hpp>

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace vgreeks {

namespace {
constexpr std::size_t kLeaf = 32;
}

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= kLeaf) {
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

SampleSummary summarize(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("summarize: need at least two samples");
  const double n = static_cast<double>(x.size());
  const double mean = pairwise_sum(x) / n;
  std::vector<double> dev(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dev[i] = (x[i] - mean) * (x[i] - mean);
  const double var = pairwise_sum(dev) / (n - 1.0);
  return {mean, std::sqrt(var / n), x.size()};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_two_sided_quantile(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>{}, 0.5 + 0.5 * confidence);
}

}  // namespace vgreeks
