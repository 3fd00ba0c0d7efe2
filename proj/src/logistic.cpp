#include "wigi/logistic.hpp"

#include <cmath>
#include <string>

#include "wigi/errors.hpp"

namespace wigi::stats {

namespace {

double softplus(double eta) { return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

double sigmoid(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  double e = std::exp(eta);
  return e / (1.0 + e);
}

// Fitted probabilities this close to 0 or 1 mean the likelihood is being
// maximized at infinity along some direction.
constexpr double kSaturation = 1e-8;

}  // namespace

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& features) {
  Eigen::MatrixXd design(features.rows(), features.cols() + 1);
  design.leftCols(features.cols()) = features;
  design.col(features.cols()).setOnes();
  return design;
}

double logistic_log_likelihood(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                               const Eigen::VectorXd& beta) {
  Eigen::VectorXd eta = design * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += labels(i) * eta(i) - softplus(eta(i));
  return ll;
}

Eigen::VectorXd logistic_score(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                               const Eigen::VectorXd& beta) {
  Eigen::VectorXd eta = design * beta;
  Eigen::VectorXd resid(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) resid(i) = labels(i) - sigmoid(eta(i));
  return design.transpose() * resid;
}

LogitFit logistic_fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                      std::vector<std::string> names, const LogitOptions& options) {
  const Eigen::Index n = features.rows();
  const Eigen::Index k = features.cols();
  if (labels.size() != n) throw DomainError("labels and features differ in row count");
  if (n <= k + 1) {
    throw DomainError("need more observations (" + std::to_string(n) + ") than parameters (" +
                      std::to_string(k + 1) + ")");
  }
  double positives = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels(i) != 0.0 && labels(i) != 1.0) throw DomainError("labels must be 0 or 1");
    positives += labels(i);
  }
  if (positives == 0.0 || positives == static_cast<double>(n)) {
    throw DomainError("labels contain a single class");
  }
  if (names.empty()) {
    for (Eigen::Index j = 0; j < k; ++j) names.push_back("x" + std::to_string(j));
  }
  if (static_cast<Eigen::Index>(names.size()) != k) throw DomainError("one name per feature column");
  names.push_back("intercept");

  const Eigen::MatrixXd design = with_intercept(features);
  const Eigen::Index p = k + 1;

  LogitFit fit;
  fit.names = std::move(names);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double ll = logistic_log_likelihood(design, labels, beta);

  Eigen::VectorXd mu(n), weights(n);
  Eigen::MatrixXd info(p, p);
  Eigen::VectorXd score(p);
  auto evaluate = [&](const Eigen::VectorXd& b) {
    Eigen::VectorXd eta = design * b;
    for (Eigen::Index i = 0; i < n; ++i) {
      mu(i) = sigmoid(eta(i));
      weights(i) = mu(i) * (1.0 - mu(i));
    }
    score = design.transpose() * (labels - mu);
    info = design.transpose() * weights.asDiagonal() * design;
  };

  bool diverged = false;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    evaluate(beta);
    fit.iterations = iter;
    if (score.cwiseAbs().maxCoeff() < options.score_tolerance) {
      fit.converged = true;
      break;
    }
    Eigen::VectorXd step = info.ldlt().solve(score);
    if (!step.allFinite()) {
      diverged = true;
      break;
    }
    // score' info^-1 score does not depend on column scale, unlike the score
    // itself; near the optimum it is twice the remaining log-likelihood gain
    const double decrement = score.dot(step);
    const bool last_step = decrement < options.decrement_tolerance;
    // step halving keeps the log-likelihood monotone
    double trial_ll = ll;
    Eigen::VectorXd trial = beta;
    bool improved = false;
    for (int half = 0; half < 40; ++half) {
      trial = beta + step;
      trial_ll = logistic_log_likelihood(design, labels, trial);
      if (trial_ll >= ll) {
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) {
      fit.converged = last_step;
      break;
    }
    beta = trial;
    ll = trial_ll;
    if (last_step) {
      fit.converged = true;
      break;
    }
    if ((design * beta).cwiseAbs().maxCoeff() > options.divergence_bound) {
      diverged = true;
      break;
    }
  }
  evaluate(beta);
  fit.iterations += 1;

  bool saturated = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::min(mu(i), 1.0 - mu(i)) < kSaturation) saturated = true;
  }
  fit.separation_flag = diverged || saturated;
  if (fit.separation_flag) fit.converged = false;

  fit.coefficients = beta;
  fit.log_likelihood = ll;
  fit.score_max_norm = score.cwiseAbs().maxCoeff();
  double rate = positives / static_cast<double>(n);
  fit.null_log_likelihood =
      static_cast<double>(n) * (rate * std::log(rate) + (1.0 - rate) * std::log1p(-rate));

  Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  fit.standard_errors.resize(p);
  fit.z_scores.resize(p);
  fit.p_values.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double var = cov(j, j);
    double se = (std::isfinite(var) && var > 0.0) ? std::sqrt(var) : std::nan("");
    fit.standard_errors(j) = se;
    fit.z_scores(j) = beta(j) / se;
    fit.p_values(j) = std::isfinite(se) ? std::erfc(std::fabs(fit.z_scores(j)) / std::sqrt(2.0))
                                        : std::nan("");
  }
  return fit;
}

}  // namespace wigi::stats
