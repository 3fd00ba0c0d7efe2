#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wigi::stats {

struct CorrelationResult {
  double coefficient = 0.0;
  std::size_t n = 0;
  double p_value = 1.0;  // two-sided, t distribution with n-2 df
};

/// Product-moment correlation. Requires n >= 3 and both inputs nonconstant.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of average ranks (ties share the mean rank).
CorrelationResult spearman(std::span<const double> x, std::span<const double> y);

/// 1-based ranks; tied values receive the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Two-sided p-value of a correlation coefficient r with n observations.
double correlation_p_value(double r, std::size_t n);

struct ChiSquareResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
};

/// Pearson chi-squared test of independence on an r x c table of counts.
/// Throws DomainError naming the first row or column whose sum is zero.
ChiSquareResult chi_squared(const std::vector<std::vector<double>>& table);

/// Regularized incomplete gamma functions P(s, x) and Q(s, x) = 1 - P(s, x).
double gamma_p(double s, double x);
double gamma_q(double s, double x);

/// Survival function of the chi-square distribution.
inline double chi_square_sf(double statistic, int df) { return gamma_q(0.5 * df, 0.5 * statistic); }

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n = 0;
  bool constant_response = false;  // R^2 reported as 0
};

/// Simple linear regression of y on x. Requires n >= 2 and nonconstant x.
OlsFit ols(std::span<const double> x, std::span<const double> y);

}  // namespace wigi::stats
