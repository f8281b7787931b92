#include "scopone/experiments/stats.hpp"

#include <gtest/gtest.h>

#include <random>

namespace scopone::stats {
namespace {

// Reference values from statsmodels proportion_confint (z = 1.959964).
TEST(StatsTest, WaldInterval) {
  auto a = wald_interval(3, 21);
  EXPECT_DOUBLE_EQ(a.low, 0.0);  // clipped
  EXPECT_NEAR(a.high, 0.292521, 1e-4);
  auto b = wald_interval(411, 1000);
  EXPECT_NEAR(b.low, 0.380505, 1e-4);
  EXPECT_NEAR(b.high, 0.441495, 1e-4);
  auto c = wald_interval(10, 10);
  EXPECT_DOUBLE_EQ(c.low, 1.0);
  EXPECT_DOUBLE_EQ(c.high, 1.0);
  EXPECT_DOUBLE_EQ(wald_interval(0, 0).high, 0.0);
}

TEST(StatsTest, WilsonInterval) {
  auto a = wilson_interval(3, 21);
  EXPECT_NEAR(a.low, 0.049810, 1e-4);
  EXPECT_NEAR(a.high, 0.346361, 1e-4);
  auto b = wilson_interval(411, 1000);
  EXPECT_NEAR(b.low, 0.380902, 1e-4);
  EXPECT_NEAR(b.high, 0.441779, 1e-4);
  auto c = wilson_interval(0, 10);
  EXPECT_NEAR(c.low, 0.0, 1e-12);
  EXPECT_NEAR(c.high, 0.277533, 1e-4);
}

TEST(StatsTest, IntervalsContainTheEstimate) {
  for (int n = 1; n < 60; ++n)
    for (int k = 0; k <= n; ++k) {
      double p = double(k) / n;
      for (auto iv : {wald_interval(k, n), wilson_interval(k, n)}) {
        EXPECT_LE(iv.low, p + 1e-12);
        EXPECT_GE(iv.high, p - 1e-12);
        EXPECT_GE(iv.low, -1e-12);
        EXPECT_LE(iv.high, 1 + 1e-12);
      }
    }
}

TEST(StatsTest, StandardError) {
  EXPECT_NEAR(standard_error(411, 1000), 0.015558, 1e-6);
  EXPECT_EQ(standard_error(0, 0), 0);
}

// Reference values from statsmodels proportions_ztest.
TEST(StatsTest, TwoProportionZ) {
  auto r = two_proportion_z(411, 1000, 520, 1000);
  EXPECT_NEAR(r.statistic, -4.886274, 1e-5);
  EXPECT_NEAR(r.p_value, 1.0276e-06, 1e-9);
  auto s = two_proportion_z(60, 100, 50, 100);
  EXPECT_NEAR(s.statistic, 1.421338, 1e-5);
  EXPECT_NEAR(s.p_value, 0.155218, 1e-5);
  EXPECT_THROW(two_proportion_z(1, 0, 1, 1), std::invalid_argument);
}

// Statistics from scipy ks_2samp; p-values agree with its asymptotic mode
// up to the small-sample correction used here.
TEST(StatsTest, KolmogorovSmirnov) {
  std::vector<double> a, b;
  for (int i = 0; i < 100; ++i) a.push_back(i * 0.01);
  for (int i = 0; i < 80; ++i) b.push_back(0.3 + i * 0.012);
  auto r = ks_two_sample(a, b);
  EXPECT_NEAR(r.statistic, 0.3075, 1e-9);
  EXPECT_NEAR(r.p_value, 0.000343, 2e-4);

  a.clear(), b.clear();
  for (int i = 0; i < 200; ++i) a.push_back((i * 37 % 101) / 101.0);
  for (int i = 0; i < 150; ++i) b.push_back(std::pow((i * 53 % 97) / 97.0, 1.2));
  auto s = ks_two_sample(a, b);
  EXPECT_NEAR(s.statistic, 0.095, 1e-9);
  EXPECT_NEAR(s.p_value, 0.3948, 0.03);
  EXPECT_THROW(ks_two_sample({}, {1.0}), std::invalid_argument);
}

TEST(StatsTest, KsAcceptsSameDistributionAtNominalRate) {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> e(2.0);
  int rejected = 0;
  for (int t = 0; t < 400; ++t) {
    std::vector<double> a(100), b(100);
    for (auto& x : a) x = e(rng);
    for (auto& x : b) x = e(rng);
    rejected += ks_two_sample(a, b).p_value < 0.05;
  }
  EXPECT_LT(rejected, 40);
}

TEST(StatsTest, Summarize) {
  auto s = summarize({3, 1, 4, 1, 5, 9, 2, 6});
  EXPECT_DOUBLE_EQ(s.mean, 3.875);
  EXPECT_DOUBLE_EQ(s.median, 3.5);
  EXPECT_NEAR(s.std_error, 0.971698, 1e-6);
  EXPECT_EQ(s.n, 8u);
  EXPECT_DOUBLE_EQ(summarize({2, 7, 1}).median, 2);
  EXPECT_EQ(summarize({}).n, 0u);
}

}  // namespace
}  // namespace scopone::stats
