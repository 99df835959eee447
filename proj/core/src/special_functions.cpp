#include "folkseg/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "folkseg/errors.hpp"
#include "folkseg/format.hpp"

namespace folkseg {
namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEpsilon = 1e-15;
constexpr double kTiny = 1e-300;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Continued fraction for I_x(a, b) (Numerical Recipes betacf form).
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) <= kEpsilon) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge (x=" +
                       format_number(x) + ", a=" + format_number(a) +
                       ", b=" + format_number(b) + ")");
}

// Returns {I_x(a,b), 1 - I_x(a,b)} with y = 1 - x supplied separately so
// that callers holding an exact complement keep full precision.
std::array<double, 2> beta_pair(double x, double y, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw NumericalError("incomplete beta needs a, b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) throw NumericalError("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return {0.0, 1.0};
  if (y == 0.0) return {1.0, 0.0};
  const double log_front = a * std::log(x) + b * std::log(y) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double lower = std::exp(log_front) * beta_continued_fraction(x, a, b) / a;
    return {lower, 1.0 - lower};
  }
  const double upper = std::exp(log_front) * beta_continued_fraction(y, b, a) / b;
  return {1.0 - upper, upper};
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw NumericalError("log_gamma needs x > 0, got " + format_number(x));
  if (x < 0.5) {
    // Reflection: Γ(x)Γ(1-x) = π / sin(πx).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  x -= 1.0;
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (x + static_cast<double>(i));
  const double t = x + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(sum);
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

double regularized_beta(double x, double a, double b) { return beta_pair(x, 1.0 - x, a, b)[0]; }

double regularized_beta_complement(double x, double a, double b) {
  return beta_pair(x, 1.0 - x, a, b)[1];
}

double f_survival(double f, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) {
    throw NumericalError("F distribution needs positive degrees of freedom");
  }
  if (std::isnan(f)) throw NumericalError("F statistic is NaN");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double denom = df1 * f + df2;
  const double x = df1 * f / denom;
  const double y = df2 / denom;
  const double p = beta_pair(x, y, df1 / 2.0, df2 / 2.0)[1];
  return std::clamp(p, 0.0, 1.0);
}

double t_two_sided(double t, double df) {
  if (!(df > 0.0)) throw NumericalError("t distribution needs df > 0");
  if (std::isnan(t)) throw NumericalError("t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  // P(|T| >= t) = I_{df/(df+t^2)}(df/2, 1/2).
  const double denom = df + t * t;
  const double p = beta_pair(df / denom, t * t / denom, df / 2.0, 0.5)[0];
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace folkseg
