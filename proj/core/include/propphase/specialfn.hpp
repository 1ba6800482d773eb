#pragma once

namespace propphase {

/// Tolerance pair used by adaptive series evaluation.
struct Accuracy {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  void validate() const;  // throws DomainError unless both are positive
};

/// ln Gamma(x) for x > 0. Relative error <= 1e-12.
double log_gamma(double x);

/// Standard normal CDF. Absolute error <= 1e-12.
double std_normal_cdf(double x);

/// Standard normal quantile for p in (0,1). |Phi(result) - p| <= 1e-10.
double std_normal_quantile(double p);

/// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a),
/// a > 0, x >= 0. Relative error <= 1e-10.
double reg_gamma_lower(double a, double x);

/// Regularized incomplete beta I_x(a,b), 0 <= x <= 1, a,b > 0.
/// Relative error <= 1e-10.
double reg_beta(double x, double a, double b);

}  // namespace propphase
