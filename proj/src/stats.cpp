#include "wigi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "wigi/errors.hpp"

namespace wigi::stats {

namespace {

void require_pair(std::span<const double> x, std::span<const double> y, std::size_t min_n) {
  if (x.size() != y.size()) throw DomainError("series lengths differ");
  if (x.size() < min_n) {
    throw DomainError("need at least " + std::to_string(min_n) + " observations, got " +
                      std::to_string(x.size()));
  }
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

double lgamma_positive(double s) { return boost::math::lgamma(s); }

double gamma_p_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  double a = s;
  for (int i = 0; i < kMaxIter; ++i) {
    a += 1.0;
    term *= x / a;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + s * std::log(x) - lgamma_positive(s));
}

// Modified Lentz evaluation of the continued fraction for Q(s, x).
double gamma_q_fraction(double s, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + s * std::log(x) - lgamma_positive(s)) * h;
}

void check_gamma_args(double s, double x) {
  if (!(s > 0.0) || !(x >= 0.0)) throw DomainError("incomplete gamma needs s > 0 and x >= 0");
}

}  // namespace

double gamma_p(double s, double x) {
  check_gamma_args(s, x);
  if (x == 0.0) return 0.0;
  if (x < s + 1.0) return gamma_p_series(s, x);
  return 1.0 - gamma_q_fraction(s, x);
}

double gamma_q(double s, double x) {
  check_gamma_args(s, x);
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
  return gamma_q_fraction(s, x);
}

double correlation_p_value(double r, std::size_t n) {
  if (n < 3) throw DomainError("correlation p-value needs n >= 3");
  double df = static_cast<double>(n - 2);
  if (std::fabs(r) >= 1.0) return 0.0;
  double t = std::fabs(r) * std::sqrt(df / ((1.0 - r) * (1.0 + r)));
  boost::math::students_t_distribution<double> dist(df);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, t)), 0.0, 1.0);
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y, 3);
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DomainError("zero variance series");
  double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return {r, x.size(), correlation_p_value(r, x.size())};
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 share ranks i+1..j
    double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

CorrelationResult spearman(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y, 3);
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  return pearson(rx, ry);
}

ChiSquareResult chi_squared(const std::vector<std::vector<double>>& table) {
  const std::size_t rows = table.size();
  if (rows < 2) throw DomainError("chi-squared needs at least 2 rows");
  const std::size_t cols = table.front().size();
  if (cols < 2) throw DomainError("chi-squared needs at least 2 columns");
  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (table[i].size() != cols) throw DomainError("ragged contingency table");
    for (std::size_t j = 0; j < cols; ++j) {
      double v = table[i][j];
      if (!(v >= 0.0)) throw DomainError("negative count in contingency table");
      row_sum[i] += v;
      col_sum[j] += v;
      total += v;
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (row_sum[i] == 0.0) throw DomainError("row " + std::to_string(i) + " sums to zero");
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (col_sum[j] == 0.0) throw DomainError("column " + std::to_string(j) + " sums to zero");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double expected = row_sum[i] * col_sum[j] / total;
      double diff = table[i][j] - expected;
      stat += diff * diff / expected;
    }
  }
  ChiSquareResult out;
  out.statistic = stat;
  out.df = static_cast<int>((rows - 1) * (cols - 1));
  out.p_value = std::clamp(chi_square_sf(stat, out.df), 0.0, 1.0);
  return out;
}

OlsFit ols(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y, 2);
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DomainError("regressor is constant");
  OlsFit fit;
  fit.n = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.constant_response = true;
    fit.r_squared = 0.0;
    return fit;
  }
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

}  // namespace wigi::stats
