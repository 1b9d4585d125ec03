#include "confdom/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace confdom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long kMaxDf = 1'000'000;  // keeps gamma-function arguments desk-scale
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;

// Lanczos coefficients, g = 7.
constexpr double kLanczos[9] = {
    0.99999999999980993,    676.5203681218851,     -1259.1392167224028,
    771.32342877765313,     -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};

[[noreturn]] void bad_arg(const std::string& what) { throw std::invalid_argument(what); }

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) bad_arg(std::string(name) + " must be finite");
}

// Series expansion of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - ln_gamma(a));
    }
  }
  throw std::runtime_error("incomplete gamma series did not converge");
}

// Continued fraction for Q(a,x), valid for x >= a+1 (modified Lentz).
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) {
      return std::exp(-x + a * std::log(x) - ln_gamma(a)) * h;
    }
  }
  throw std::runtime_error("incomplete gamma continued fraction did not converge");
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < 10000; ++m) {
    double md = static_cast<double>(m);
    double m2 = 2.0 * md;
    double aa = md * (b - md) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + md) * (qab + md) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

void check_kind(const DistributionKind& kind) {
  if (kind.tag != Dist::StdNormal) {
    if (kind.df < 1 || kind.df > kMaxDf) bad_arg("df must lie in [1, 1e6]");
  }
}

// Rough center of mass used as the starting point of bracket expansion.
double median_estimate(const DistributionKind& kind) {
  switch (kind.tag) {
    case Dist::StdNormal:
    case Dist::StudentT:
      return 0.0;
    case Dist::ChiSquared: {
      // Wilson-Hilferty cube approximation of the median.
      double df = static_cast<double>(kind.df);
      double t = 1.0 - 2.0 / (9.0 * df);
      return df * t * t * t;
    }
  }
  return 0.0;
}

bool is_symmetric(const DistributionKind& kind) { return kind.tag != Dist::ChiSquared; }

// Bisection on cdf(kind, .) - p over [lo, hi], then one Newton step.
double invert_cdf(const DistributionKind& kind, double p, double lo, double hi) {
  for (int i = 0; i < 300; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // no representable midpoint left
    if (cdf(kind, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-13) break;
  }
  double q = 0.5 * (lo + hi);
  if (kind.tag == Dist::ChiSquared && q <= 0.0) return q;
  double density = pdf(kind, q);
  if (std::isfinite(density) && density > 0.0) {
    double width = hi - lo;
    double polished = q - (cdf(kind, q) - p) / density;
    bool in_range = polished >= lo - width && polished <= hi + width;
    if (kind.tag == Dist::ChiSquared && polished <= 0.0) in_range = false;
    if (in_range) q = polished;
  }
  return q;
}

}  // namespace

DistributionKind DistributionKind::std_normal() { return {Dist::StdNormal, 0}; }

DistributionKind DistributionKind::chi_squared(long df) {
  DistributionKind k{Dist::ChiSquared, df};
  check_kind(k);
  return k;
}

DistributionKind DistributionKind::student_t(long df) {
  DistributionKind k{Dist::StudentT, df};
  check_kind(k);
  return k;
}

double ln_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) bad_arg("ln_gamma requires x > 0");
  if (x < 0.5) {
    // Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return std::log(kPi / std::sin(kPi * x)) - ln_gamma(1.0 - x);
  }
  double z = x - 1.0;
  double sum = kLanczos[0];
  for (int i = 1; i < 9; ++i) sum += kLanczos[i] / (z + static_cast<double>(i));
  double base = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(base) - base + std::log(sum);
}

double gamma_p(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) bad_arg("gamma_p requires a > 0");
  if (!(x >= 0.0)) bad_arg("gamma_p requires x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) bad_arg("gamma_q requires a > 0");
  if (!(x >= 0.0)) bad_arg("gamma_q requires x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) bad_arg("incomplete_beta requires a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) bad_arg("incomplete_beta requires x in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double bt = std::exp(ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * std::log(x) +
                       b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double erf(double x) {
  if (std::isnan(x)) bad_arg("erf requires a non-NaN argument");
  if (x == 0.0) return 0.0;
  double p = gamma_p(0.5, x * x);
  return x > 0.0 ? p : -p;
}

double erfc(double x) {
  if (std::isnan(x)) bad_arg("erfc requires a non-NaN argument");
  if (x >= 0.0) return gamma_q(0.5, x * x);
  return 1.0 + gamma_p(0.5, x * x);
}

double pdf(const DistributionKind& kind, double x) {
  check_kind(kind);
  require_finite(x, "x");
  switch (kind.tag) {
    case Dist::StdNormal:
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
    case Dist::ChiSquared: {
      if (x <= 0.0) bad_arg("chi-squared density needs x > 0");
      double half = static_cast<double>(kind.df) / 2.0;
      return std::exp((half - 1.0) * std::log(x) - x / 2.0 - half * std::log(2.0) -
                      ln_gamma(half));
    }
    case Dist::StudentT: {
      double df = static_cast<double>(kind.df);
      double lognorm =
          ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0) - 0.5 * std::log(df * kPi);
      return std::exp(lognorm - 0.5 * (df + 1.0) * std::log1p(x * x / df));
    }
  }
  bad_arg("unknown distribution kind");
}

double cdf(const DistributionKind& kind, double x) {
  check_kind(kind);
  require_finite(x, "x");
  switch (kind.tag) {
    case Dist::StdNormal:
      return 0.5 * erfc(-x / std::sqrt(2.0));
    case Dist::ChiSquared:
      if (x <= 0.0) return 0.0;
      return gamma_p(static_cast<double>(kind.df) / 2.0, x / 2.0);
    case Dist::StudentT: {
      double df = static_cast<double>(kind.df);
      double tail = incomplete_beta(df / 2.0, 0.5, df / (df + x * x));
      return x >= 0.0 ? 1.0 - 0.5 * tail : 0.5 * tail;
    }
  }
  bad_arg("unknown distribution kind");
}

double quantile(const DistributionKind& kind, double p) {
  check_kind(kind);
  if (!(p > 0.0 && p < 1.0)) bad_arg("quantile requires 0 < p < 1");

  if (is_symmetric(kind)) {
    // Canonical upper half keeps quantile(p) == -quantile(1-p) exact.
    if (p == 0.5) return 0.0;
    if (p < 0.5) return -quantile(kind, 1.0 - p);
    double lo = 0.0;
    double hi = 1.0;
    while (cdf(kind, hi) < p) {
      hi *= 2.0;
      if (hi > 1e300) break;
    }
    return invert_cdf(kind, p, lo, hi);
  }

  // Chi-squared: expand geometrically from the median estimate.
  double mid = median_estimate(kind);
  double lo = mid;
  double hi = mid;
  while (cdf(kind, hi) < p) {
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  while (cdf(kind, lo) > p) {
    lo *= 0.5;
    if (lo < 1e-300) {
      lo = 0.0;
      break;
    }
  }
  return invert_cdf(kind, p, lo, hi);
}

Quantile quantile_point(const DistributionKind& kind, double p) {
  return Quantile{p, quantile(kind, p)};
}

}  // namespace confdom
