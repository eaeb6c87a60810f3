#include "circadia/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace circadia::special {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Lower series: P(a,x) = x^a e^-x / Gamma(a) * sum_n x^n / (a(a+1)...(a+n)).
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw std::runtime_error("gamma_p: series did not converge");
}

// Upper continued fraction (modified Lentz).
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw std::runtime_error("gamma_q: continued fraction did not converge");
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_sf(double stat, int df) {
  if (df <= 0) throw std::invalid_argument("chi2_sf: df must be positive");
  if (stat <= 0.0) return 1.0;
  return gamma_q(0.5 * df, 0.5 * stat);
}

double normal_sf(double z) {
  double tail = 0.5 * gamma_q(0.5, 0.5 * z * z);
  return z >= 0.0 ? tail : 1.0 - tail;
}

double normal_two_sided_p(double z) {
  if (z == 0.0) return 1.0;
  return gamma_q(0.5, 0.5 * z * z);
}

}  // namespace circadia::special
