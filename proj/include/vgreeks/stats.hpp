#pragma once
// Sample statistics with a fixed summation order, and standard normal helpers.

#include <cstddef>
#include <span>

namespace vgreeks {

/// Pairwise (cascade) summation; the result depends only on the input order.
[[nodiscard]] double pairwise_sum(std::span<const double> x);

struct SampleSummary {
  double mean = 0.0;
  double std_error = 0.0;  ///< sample sd / sqrt(count)
  std::size_t count = 0;
};

/// Mean and standard error of the samples; requires at least two values.
[[nodiscard]] SampleSummary summarize(std::span<const double> x);

[[nodiscard]] double normal_cdf(double x);
[[nodiscard]] double normal_pdf(double x);
/// Two-sided critical value z with P(|N(0,1)| <= z) = confidence.
[[nodiscard]] double normal_two_sided_quantile(double confidence);

}  // namespace vgreeks
