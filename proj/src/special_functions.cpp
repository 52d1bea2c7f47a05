#include "lspec/special_functions.hpp"

#include <cmath>
#include <limits>

#include "lspec/errors.hpp"

namespace lspec {

namespace {

constexpr int kMaxIterations = 100000;
constexpr double kEps = 1e-16;

// log P(a, x) by the power series, valid and fast for x < a + 1.
double log_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return std::log(sum) - x + a * std::log(x) - std::lgamma(a);
}

// log Q(a, x) by the modified Lentz continued fraction, for x >= a + 1.
double log_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::log(h) - x + a * std::log(x) - std::lgamma(a);
}

void check(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a) || std::isnan(x)) {
    throw DomainError("incomplete gamma: need a > 0 and x >= 0");
  }
}

}  // namespace

double log_gamma_q(double a, double x) {
  check(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  if (x < a + 1.0) {
    const double log_p = log_p_series(a, x);
    return std::log1p(-std::exp(log_p));
  }
  return log_q_fraction(a, x);
}

double gamma_q(double a, double x) { return std::exp(log_gamma_q(a, x)); }

double gamma_q_integer(int n, double x) {
  if (n < 1 || !(x >= 0.0)) throw DomainError("gamma_q_integer: need n >= 1 and x >= 0");
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < n; ++j) {
    term *= x / j;
    sum += term;
  }
  return std::exp(-x) * sum;
}

}  // namespace lspec
