#pragma once

#include <functional>
#include <span>
#include <vector>

namespace moelab::stats {

/// Sum with a fixed-order pairwise reduction, so the result is independent
/// of how trials were scheduled across threads.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);
double sample_variance(std::span<const double> values);

/// Median of a copy of the data (midpoint convention for even sizes).
double median(std::vector<double> values);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

/// Standard normal quantile (inverse CDF).
double normal_quantile(double p);

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for a binomial proportion.
WilsonInterval wilson_interval(long successes, long trials, double confidence);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test of data against a CDF.
KsResult ks_test(std::vector<double> data, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov test.
KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace moelab::stats
