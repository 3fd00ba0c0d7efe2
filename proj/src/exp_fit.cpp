#include "wigi/exp_fit.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "wigi/errors.hpp"

namespace wigi::stats {

double ExpParams::operator()(double year) const { return a * std::exp(b * year + c) + d; }

namespace {

// Working parameterization: amplitude * exp(rate * (year - ref)) + offset.
struct Centered {
  double amplitude;
  double rate;
  double offset;
};

double residual_ss(std::span<const double> t, std::span<const double> y, const Centered& p) {
  double rss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double e = y[i] - (p.amplitude * std::exp(p.rate * t[i]) + p.offset);
    rss += e * e;
  }
  return rss;
}

constexpr double kLambdaMax = 1e16;

}  // namespace

ExpFit fit_exponential(std::span<const double> years, std::span<const double> ratios,
                       std::optional<ExpParams> init, const ExpFitOptions& options) {
  if (years.size() != ratios.size()) throw DomainError("years and ratios differ in length");
  if (years.size() < 5) throw DomainError("exponential fit needs at least 5 points");
  for (double r : ratios) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("ratios must lie in [0, 1]");
  }
  const std::size_t n = years.size();
  const double ref = *std::max_element(years.begin(), years.end());
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = years[i] - ref;

  Centered p;
  if (init) {
    p = {init->a * std::exp(init->b * ref + init->c), init->b, init->d};
  } else {
    auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    p = {*hi - *lo, 0.01, *lo};
  }

  ExpFit fit;
  double rss = residual_ss(t, ratios, p);
  fit.initial_rss = rss;

  double lambda = 1e-3;
  Eigen::MatrixX3d jac(n, 3);
  Eigen::VectorXd resid(n);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    fit.iterations = iter + 1;
    if (rss <= 1e-30) {
      fit.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double e = std::exp(p.rate * t[i]);
      jac(i, 0) = e;
      jac(i, 1) = p.amplitude * t[i] * e;
      jac(i, 2) = 1.0;
      resid(i) = ratios[i] - (p.amplitude * e + p.offset);
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d grad = jac.transpose() * resid;
    const double diag_floor = 1e-12 * std::max(1.0, jtj.diagonal().maxCoeff());

    bool accepted = false;
    while (lambda <= kLambdaMax) {
      Eigen::Matrix3d damped = jtj;
      for (int k = 0; k < 3; ++k) damped(k, k) += lambda * std::max(jtj(k, k), diag_floor);
      Eigen::Vector3d step = damped.ldlt().solve(grad);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      Centered trial{p.amplitude + step(0), p.rate + step(1), p.offset + step(2)};
      double trial_rss = residual_ss(t, ratios, trial);
      if (std::isfinite(trial_rss) && trial_rss < rss) {
        double change = (rss - trial_rss) / rss;
        p = trial;
        rss = trial_rss;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (change < options.relative_tolerance) fit.converged = true;
        break;
      }
      // Predicted reduction of the linearized model; negligible means we are
      // at a minimum up to rounding.
      double predicted = 2.0 * step.dot(grad) - step.dot(jtj * step);
      if (std::fabs(predicted) <= options.relative_tolerance * rss) {
        fit.converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (fit.converged) break;
    if (!accepted) break;  // maximal damping without progress
  }

  fit.rss = rss;
  fit.params = {p.amplitude, p.rate, -p.rate * ref, p.offset};

  auto [tmin, tmax] = std::minmax_element(t.begin(), t.end());
  double spread = std::fabs(p.amplitude) *
                  std::fabs(std::exp(p.rate * *tmax) - std::exp(p.rate * *tmin));
  fit.degenerate = !(spread > 1e-9);
  for (double year : years) {
    double v = fit.predict(year);
    if (!(v >= 0.0 && v <= 1.0)) fit.in_unit_range = false;
  }
  return fit;
}

double solve_parity_year(const ExpParams& params, double target) {
  if (params.b == 0.0) throw DomainError("flat model (b = 0) never reaches the target");
  if (params.a == 0.0) throw DomainError("zero amplitude (a = 0): model is constant at d");
  double q = (target - params.d) / params.a;
  if (!(q > 0.0)) {
    throw DomainError("target unreachable: (target - d) / a must be positive (target - d and a "
                      "need the same sign)");
  }
  return (std::log(q) - params.c) / params.b;
}

}  // namespace wigi::stats
