#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wigi::stats {

/// Maximum-likelihood binary logit fit. Coefficients are ordered as the
/// feature columns followed by the intercept.
struct LogitFit {
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd standard_errors;
  Eigen::VectorXd z_scores;
  Eigen::VectorXd p_values;
  double log_likelihood = 0.0;
  double null_log_likelihood = 0.0;  // intercept-only model
  double score_max_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool separation_flag = false;
};

struct LogitOptions {
  int max_iterations = 100;
  double score_tolerance = 1e-8;
  /// Newton decrement below which one final step is taken and the fit is
  /// declared converged. Unlike the score norm it ignores column scale.
  double decrement_tolerance = 1e-12;
  /// A linear predictor |x'beta| beyond this is taken as divergence caused
  /// by (quasi-)separation.
  double divergence_bound = 30.0;
};

/// Fits P(y = 1) = 1 / (1 + exp(-(X beta + intercept))) by iteratively
/// reweighted least squares with step halving. Standard errors come from
/// the inverse observed information; p-values are two-sided Wald tests.
/// Throws DomainError for mismatched sizes, n <= k + 1, non-binary labels,
/// or labels from a single class.
LogitFit logistic_fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                      std::vector<std::string> names = {}, const LogitOptions& options = {});

/// Design matrix with a trailing intercept column.
Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& features);

/// Log-likelihood and score (gradient) for a design that already contains
/// the intercept column.
double logistic_log_likelihood(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                               const Eigen::VectorXd& beta);
Eigen::VectorXd logistic_score(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                               const Eigen::VectorXd& beta);

}  // namespace wigi::stats
