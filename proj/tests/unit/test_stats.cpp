#include <vgreeks/stats.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

using namespace vgreeks;

TEST(Stats, PairwiseSumIsExactOnIntegers) {
  std::vector<double> x(1001);
  std::iota(x.begin(), x.end(), 0.0);
  EXPECT_EQ(pairwise_sum(x), 500500.0);
  EXPECT_EQ(pairwise_sum(std::span<const double>()), 0.0);
}

TEST(Stats, PairwiseSumBeatsNaiveOnSmallAddends) {
  std::vector<double> x(1 << 20, 0.1);
  EXPECT_NEAR(pairwise_sum(x), 0.1 * (1 << 20), 1e-6);
}

TEST(Stats, Summary) {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const auto s = summarize(x);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.std_error, std::sqrt(5.0 / 3.0) / 2.0);
  EXPECT_EQ(s.count, 4u);
  EXPECT_THROW((void)summarize(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Stats, NormalFunctions) {
  EXPECT_NEAR(normal_cdf(0.1), 0.539827837277029, 1e-15);
  EXPECT_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_pdf(0.0), 0.3989422804014327, 1e-16);
  EXPECT_NEAR(normal_two_sided_quantile(0.99), 2.5758293035489008, 1e-12);
  EXPECT_NEAR(normal_two_sided_quantile(0.95), 1.9599639845400542, 1e-12);
  EXPECT_THROW((void)normal_two_sided_quantile(1.0), std::invalid_argument);
}
