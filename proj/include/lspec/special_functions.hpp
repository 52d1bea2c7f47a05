#pragma once

namespace lspec {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a) for
/// a > 0, x >= 0. Series for x < a + 1, Lentz continued fraction otherwise.
double gamma_q(double a, double x);

/// log Q(a, x), accurate where Q itself underflows.
double log_gamma_q(double a, double x);

/// Q(n, x) for integer n >= 1 via e^{-x} sum_{j<n} x^j / j!. Reference only.
double gamma_q_integer(int n, double x);

}  // namespace lspec
