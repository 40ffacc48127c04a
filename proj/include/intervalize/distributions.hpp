#pragma once

namespace itv {

// Distribution helpers for the significance tests.  Built on lgamma plus the
// regularized incomplete beta/gamma functions; accuracy is driven by the
// studentized range quantile, which must invert its CDF to ~1e-9.

double normal_cdf(double x);
double normal_pdf(double x);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double x, double a, double b);

/// Regularized lower incomplete gamma P(a, x).
double incomplete_gamma(double a, double x);

double t_cdf(double x, double df);
/// Inverse of t_cdf at probability p.
double t_quantile(double p, double df);

double f_cdf(double x, double df1, double df2);
double chi_squared_cdf(double x, double df);

/// CDF of the studentized range with k groups and df error degrees of
/// freedom; df <= 0 means infinite.
double studentized_range_cdf(double q, int k, double df);

/// Upper-alpha quantile of the studentized range; absolute tolerance well
/// below 1e-4.  Raises NumericalError on non-convergence.
double studentized_range_quantile(double alpha, int k, double df);

}  // namespace itv
