#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace scopone::stats {

struct Interval {
  double low = 0;
  double high = 0;
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Normal-approximation binomial interval.
inline Interval wald_interval(int k, int n, double z = 1.96) {
  if (n <= 0) return {0, 0};
  double p = static_cast<double>(k) / n;
  double half = z * std::sqrt(p * (1 - p) / n);
  return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

inline Interval wilson_interval(int k, int n, double z = 1.96) {
  if (n <= 0) return {0, 0};
  double p = static_cast<double>(k) / n;
  double z2 = z * z;
  double denom = 1 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {center - half, center + half};
}

inline double standard_error(int k, int n) {
  if (n <= 0) return 0;
  double p = static_cast<double>(k) / n;
  return std::sqrt(p * (1 - p) / n);
}

struct TestResult {
  double statistic = 0;
  double p_value = 1;
};

// Pooled two-proportion z-test, two-sided.
inline TestResult two_proportion_z(int k1, int n1, int k2, int n2) {
  if (n1 <= 0 || n2 <= 0) throw std::invalid_argument("empty sample");
  double p1 = static_cast<double>(k1) / n1, p2 = static_cast<double>(k2) / n2;
  double pooled = static_cast<double>(k1 + k2) / (n1 + n2);
  double se = std::sqrt(pooled * (1 - pooled) * (1.0 / n1 + 1.0 / n2));
  if (se == 0) return {0, 1};
  double z = (p1 - p2) / se;
  return {z, 2 * (1 - normal_cdf(std::fabs(z)))};
}

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
inline TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
  }
  double ne = double(a.size()) * b.size() / (a.size() + b.size());
  double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  if (lambda < 0.3) return {d, 1.0};
  double p = 0;
  for (int k = 1; k <= 100; ++k) p += 2 * ((k % 2) ? 1 : -1) * std::exp(-2.0 * k * k * lambda * lambda);
  return {d, std::clamp(p, 0.0, 1.0)};
}

struct Summary {
  double mean = 0;
  double median = 0;
  double std_error = 0;
  std::size_t n = 0;
};

inline Summary summarize(std::vector<double> xs) {
  Summary s;
  s.n = xs.size();
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  std::sort(xs.begin(), xs.end());
  s.median = xs.size() % 2 ? xs[xs.size() / 2] : 0.5 * (xs[xs.size() / 2 - 1] + xs[xs.size() / 2]);
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std_error = std::sqrt(ss / (xs.size() - 1)) / std::sqrt(double(xs.size()));
  }
  return s;
}

}  // namespace scopone::stats
