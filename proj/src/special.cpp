#include "styvar/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "styvar/error.hpp"

namespace styvar::special {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, 9 coefficients (Godfrey's set).
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_log_gamma(double x) {
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    return std::log(kPi / std::fabs(std::sin(kPi * x))) -
           lanczos_log_gamma(1.0 - x);
  }
  x -= 1.0;
  double a = kLanczos[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return 0.5 * std::log(2.0 * kPi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

double log_beta(double a, double b) {
  return lanczos_log_gamma(a) + lanczos_log_gamma(b) - lanczos_log_gamma(a + b);
}

// Continued fraction for the incomplete beta, modified Lentz.
double beta_cf(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

// Series for the lower incomplete gamma P(a, x), x < a + 1.
double gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - lanczos_log_gamma(a));
}

// Continued fraction for the upper incomplete gamma Q(a, x), x >= a + 1.
double gamma_cf(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - lanczos_log_gamma(a));
}

double bisect_quantile(double p, double lo, double hi,
                       double (*cdf)(double, double, double), double p1,
                       double p2) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid, p1, p2) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13 * (1.0 + std::fabs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) && x == std::floor(x))
    throw internal_error("log_gamma at a non-positive integer");
  return lanczos_log_gamma(x);
}

double reg_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw internal_error("reg_incomplete_beta: shape parameters must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(x, a, b) / a;
  return 1.0 - front * beta_cf(1.0 - x, b, a) / b;
}

double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw internal_error("reg_lower_gamma: invalid parameters");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_cf(a, x);
}

double reg_upper_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw internal_error("reg_upper_gamma: invalid parameters");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_cf(a, x);
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double t_cdf(double x, double df) {
  if (!(df > 0.0)) throw internal_error("t_cdf: df must be > 0");
  if (x == 0.0) return 0.5;
  const double ib = reg_incomplete_beta(df / (df + x * x), 0.5 * df, 0.5);
  return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

double t_sf(double x, double df) { return t_cdf(-x, df); }

double chi_square_cdf(double x, double df) {
  if (!(df > 0.0)) throw internal_error("chi_square_cdf: df must be > 0");
  if (x <= 0.0) return 0.0;
  return reg_lower_gamma(0.5 * df, 0.5 * x);
}

double chi_square_sf(double x, double df) {
  if (!(df > 0.0)) throw internal_error("chi_square_sf: df must be > 0");
  if (x <= 0.0) return 1.0;
  return reg_upper_gamma(0.5 * df, 0.5 * x);
}

double f_cdf(double x, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0))
    throw internal_error("f_cdf: df must be > 0");
  if (x <= 0.0) return 0.0;
  return reg_incomplete_beta(df1 * x / (df1 * x + df2), 0.5 * df1, 0.5 * df2);
}

double f_sf(double x, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0))
    throw internal_error("f_sf: df must be > 0");
  if (x <= 0.0) return 1.0;
  // Complement identity keeps precision when f_cdf is close to 1.
  return reg_incomplete_beta(df2 / (df1 * x + df2), 0.5 * df2, 0.5 * df1);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw internal_error("normal_quantile: p must be in (0, 1)");
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0))
    throw internal_error("t_quantile: p must be in (0, 1)");
  auto cdf = [](double x, double d, double) { return t_cdf(x, d); };
  return bisect_quantile(p, -1e4, 1e4, cdf, df, 0.0);
}

double f_quantile(double p, double df1, double df2) {
  if (!(p > 0.0 && p < 1.0))
    throw internal_error("f_quantile: p must be in (0, 1)");
  auto cdf = [](double x, double d1, double d2) { return f_cdf(x, d1, d2); };
  double hi = 10.0;
  while (f_cdf(hi, df1, df2) < p && hi < 1e12) hi *= 4.0;
  return bisect_quantile(p, 0.0, hi, cdf, df1, df2);
}

}  // namespace styvar::special
