#pragma once

#include <optional>
#include <span>

namespace wigi::stats {

/// Parameters of ratio(year) = a * exp(b * year + c) + d.
struct ExpParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double operator()(double year) const;
};

struct ExpFit {
  ExpParams params;
  double rss = 0.0;
  double initial_rss = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Every fitted-domain prediction lies in [0, 1].
  bool in_unit_range = true;
  /// The exponential term is flat over the fitted domain (a -> 0 or b -> 0).
  bool degenerate = false;

  double predict(double year) const { return params(year); }
};

struct ExpFitOptions {
  int max_iterations = 500;
  double relative_tolerance = 1e-10;
};

/// Least-squares fit of the shifted exponential by Levenberg-Marquardt.
/// Only a * exp(c) is identified jointly; the fit reports c = -b * y_ref with
/// y_ref the latest year, so `a` is the amplitude at that year.
/// Requires >= 5 points with ratios in [0, 1].
ExpFit fit_exponential(std::span<const double> years, std::span<const double> ratios,
                       std::optional<ExpParams> init = std::nullopt,
                       const ExpFitOptions& options = {});

/// Year at which the model reaches `target`. Throws DomainError when b == 0
/// or (target - d) / a <= 0.
double solve_parity_year(const ExpParams& params, double target);

}  // namespace wigi::stats
