#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace latgrow::stats {

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator); nullopt for n < 2.
std::optional<double> stddev(std::span<const double> x);
/// Coefficient of variation; nullopt for n < 2 or zero mean.
std::optional<double> cv(std::span<const double> x);

struct Proportion {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  double lo = 0.0;  // Wilson 95% interval
  double hi = 1.0;
  double sigma = 0.0;  // binomial standard error sqrt(p(1-p)/n)
};

Proportion wilson(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// True when a is not significantly above b: a <= b + 2 sigma combined.
bool not_above_2sigma(const Proportion& a, const Proportion& b);
/// True when a is significantly below b: a + 2 sigma combined < b.
bool below_2sigma(const Proportion& a, const Proportion& b);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Asymptotic Kolmogorov survival function Q(lambda) = P(K > lambda).
double kolmogorov_q(double lambda);
KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Pearson chi-square goodness of fit; returns p-value. Bins with expected
/// count below `min_expected` are pooled into the last bin.
double chi_square_gof(std::span<const double> observed, std::span<const double> expected,
                      double min_expected = 5.0);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t n = 0;
};

std::optional<LinearFit> least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace latgrow::stats
