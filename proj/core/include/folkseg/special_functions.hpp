#pragma once

namespace folkseg {

/// ln Γ(x) for x > 0 (Lanczos approximation, g = 7, relative error ~1e-15).
double log_gamma(double x);

/// ln B(a, b).
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b) for x in [0, 1], a, b > 0.
/// Continued fraction evaluated with the modified Lentz method; throws
/// NumericalError when it fails to converge.
double regularized_beta(double x, double a, double b);

/// 1 - I_x(a, b), computed without cancellation.
double regularized_beta_complement(double x, double a, double b);

/// Upper tail P(F' >= f) of the F distribution with (df1, df2) degrees of
/// freedom. Returns 1 for f <= 0.
double f_survival(double f, double df1, double df2);

/// Two-sided p-value of Student's t with `df` degrees of freedom.
double t_two_sided(double t, double df);

}  // namespace folkseg
