#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wigi/errors.hpp"
#include "wigi/exp_fit.hpp"
#include "wigi/logistic.hpp"

using namespace wigi;
using doctest::Approx;

namespace {

const stats::ExpParams kTruth{0.4, 0.02, -40.0, 0.1};

std::vector<double> decades() {
  std::vector<double> y;
  for (int d = 1800; d <= 1980; d += 10) y.push_back(d);
  return y;
}

}  // namespace

TEST_CASE("parity year closed form") {
  CHECK(stats::solve_parity_year(kTruth, 0.5) == Approx(2000.0).epsilon(1e-15));
  CHECK(stats::solve_parity_year({0.4, 0.02, -40.0, 0.1}, 0.1 + 0.4 * std::exp(-0.2)) ==
        Approx(1990.0).epsilon(1e-13));
  CHECK_THROWS_AS(stats::solve_parity_year({0.4, 0.0, 0.0, 0.1}, 0.5), DomainError);
  CHECK_THROWS_AS(stats::solve_parity_year({0.0, 0.02, 0.0, 0.1}, 0.5), DomainError);
  CHECK_THROWS_AS(stats::solve_parity_year({0.4, 0.02, -40.0, 0.6}, 0.5), DomainError);
}

TEST_CASE("noiseless exponential is recovered") {
  auto years = decades();
  std::vector<double> y;
  for (double t : years) y.push_back(kTruth(t));
  auto fit = stats::fit_exponential(years, y);
  CHECK(fit.converged);
  CHECK(fit.rss <= fit.initial_rss);
  CHECK(fit.in_unit_range);
  CHECK_FALSE(fit.degenerate);
  double worst = 0;
  for (double t = 1800; t <= 1980; t += 1) worst = std::max(worst, std::fabs(fit.predict(t) - kTruth(t)));
  CHECK(worst < 1e-6);
  CHECK(fit.params.b == Approx(kTruth.b).epsilon(1e-6));
  CHECK(fit.params.d == Approx(kTruth.d).epsilon(1e-6));
  CHECK(fit.params.a * std::exp(fit.params.c) == Approx(kTruth.a * std::exp(kTruth.c)).epsilon(1e-5));
  CHECK(stats::solve_parity_year(fit.params, 0.5) == Approx(2000.0).epsilon(1e-6));
}

TEST_CASE("generate then fit over two centuries") {
  std::vector<double> years, y;
  const stats::ExpParams truth{0.5, 0.02, -40.0, 0.05};
  for (int t = 1800; t <= 2000; t += 10) {
    years.push_back(t);
    y.push_back(truth(t));
  }
  auto fit = stats::fit_exponential(years, y);
  CHECK(fit.rss < 1e-12);
  for (double t : years) CHECK(std::fabs(fit.predict(t) - truth(t)) < 1e-6);
}

TEST_CASE("decreasing and offset curves") {
  std::vector<double> years{0, 1, 2, 3, 4, 5, 6, 7};
  stats::ExpParams truth{0.5, -0.4, 0.0, 0.2};
  std::vector<double> y;
  for (double t : years) y.push_back(truth(t));
  auto fit = stats::fit_exponential(years, y);
  for (double t : years) CHECK(fit.predict(t) == Approx(truth(t)).epsilon(1e-8));
}

TEST_CASE("constant series is flagged degenerate") {
  std::vector<double> years{1900, 1910, 1920, 1930, 1940, 1950};
  std::vector<double> y(6, 0.2);
  auto fit = stats::fit_exponential(years, y);
  CHECK(fit.degenerate);
  for (double t : years) CHECK(fit.predict(t) == Approx(0.2).epsilon(1e-9));
}

TEST_CASE("exponential fit input checks") {
  std::vector<double> four{1, 2, 3, 4};
  CHECK_THROWS_AS(stats::fit_exponential(four, four), DomainError);
  std::vector<double> years{1, 2, 3, 4, 5}, bad{0.1, 0.2, 1.5, 0.3, 0.2};
  CHECK_THROWS_AS(stats::fit_exponential(years, bad), DomainError);
}

TEST_CASE("noisy replicates stay inside the noise envelope") {
  auto years = decades();
  std::mt19937_64 rng(99);
  const double sigma = 0.004;
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> mean_pred(years.size(), 0.0);
  int inside = 0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> y;
    for (double t : years) y.push_back(std::clamp(kTruth(t) + noise(rng), 0.0, 1.0));
    auto fit = stats::fit_exponential(years, y);
    CHECK(fit.rss <= fit.initial_rss);
    double worst = 0;
    for (std::size_t i = 0; i < years.size(); ++i) {
      double p = fit.predict(years[i]);
      mean_pred[i] += p / reps;
      worst = std::max(worst, std::fabs(p - kTruth(years[i])));
    }
    inside += worst < 3 * sigma;
  }
  CHECK(inside >= reps * 99 / 100);
  for (std::size_t i = 0; i < years.size(); ++i) CHECK(std::fabs(mean_pred[i] - kTruth(years[i])) < 0.1 * sigma);
}

TEST_CASE("logit: no effect gives beta near 0 and p near 1") {
  Eigen::MatrixXd x(400, 1);
  Eigen::VectorXd y(400);
  for (int i = 0; i < 400; ++i) {
    x(i, 0) = i < 200 ? 1.0 : 0.0;
    y(i) = (i % 2) ? 1.0 : 0.0;
  }
  auto fit = stats::logistic_fit(x, y, {"group"});
  CHECK(fit.converged);
  CHECK(std::fabs(fit.coefficients(0)) < 1e-10);
  CHECK(fit.p_values(0) == Approx(1.0).epsilon(1e-9));
  CHECK(fit.names == std::vector<std::string>{"group", "intercept"});
}

TEST_CASE("logit: separation is flagged") {
  Eigen::MatrixXd x(40, 1);
  Eigen::VectorXd y(40);
  for (int i = 0; i < 40; ++i) {
    x(i, 0) = i;
    y(i) = i >= 20 ? 1.0 : 0.0;
  }
  auto fit = stats::logistic_fit(x, y);
  CHECK(fit.separation_flag);
  CHECK_FALSE(fit.converged);

  Eigen::MatrixXd b(6, 1);
  b << 0, 0, 0, 1, 1, 1;
  Eigen::VectorXd yb(6);
  yb << 0, 0, 0, 1, 1, 1;
  CHECK(stats::logistic_fit(b, yb).separation_flag);
}

TEST_CASE("logit agrees with a Newton oracle and finite differences") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 5; ++rep) {
    const int n = 60, k = 3;
    Eigen::MatrixXd x(n, k);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      double eta = -0.3;
      for (int j = 0; j < k; ++j) {
        x(i, j) = nd(rng);
        eta += (0.5 - 0.4 * j) * x(i, j);
      }
      y(i) = std::uniform_real_distribution<double>(0, 1)(rng) < 1 / (1 + std::exp(-eta)) ? 1.0 : 0.0;
    }
    auto fit = stats::logistic_fit(x, y);
    REQUIRE(fit.converged);
    Eigen::MatrixXd design = stats::with_intercept(x);
    Eigen::VectorXd want = oracle::newton_logit(design, y);
    CHECK((fit.coefficients - want).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(fit.score_max_norm < 1e-6);
    CHECK(fit.log_likelihood == Approx(oracle::logit_loglik(design, y, fit.coefficients)).epsilon(1e-12));
    for (Eigen::Index j = 0; j <= k; ++j) {
      CHECK(fit.z_scores(j) == Approx(fit.coefficients(j) / fit.standard_errors(j)).epsilon(1e-12));
    }
    Eigen::VectorXd b(k + 1);
    for (int j = 0; j <= k; ++j) b(j) = nd(rng);
    Eigen::VectorXd analytic = stats::logistic_score(design, y, b);
    Eigen::VectorXd numeric = oracle::fd_gradient(design, y, b);
    CHECK((analytic - numeric).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(stats::logistic_log_likelihood(design, y, b) == Approx(oracle::logit_loglik(design, y, b)).epsilon(1e-12));
  }
}

TEST_CASE("logit input errors") {
  Eigen::MatrixXd x(5, 1);
  x << 1, 2, 3, 4, 5;
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(5);
  CHECK_THROWS_AS(stats::logistic_fit(x, ones), DomainError);
  Eigen::VectorXd bad(5);
  bad << 0, 1, 2, 0, 1;
  CHECK_THROWS_AS(stats::logistic_fit(x, bad), DomainError);
  Eigen::MatrixXd wide(3, 2);
  wide << 1, 2, 3, 4, 5, 6;
  Eigen::VectorXd y3(3);
  y3 << 0, 1, 0;
  CHECK_THROWS_AS(stats::logistic_fit(wide, y3), DomainError);
  Eigen::VectorXd y(5);
  y << 0, 1, 0, 1, 1;
  CHECK_THROWS_AS(stats::logistic_fit(x, y, {"a", "b"}), DomainError);
}
