#pragma once

namespace confdom {

enum class Dist { StdNormal, ChiSquared, StudentT };

// Distribution selector for pdf/cdf/quantile. df applies to ChiSquared and
// StudentT and must lie in [1, 1'000'000].
struct DistributionKind {
  Dist tag = Dist::StdNormal;
  long df = 0;

  static DistributionKind std_normal();
  static DistributionKind chi_squared(long df);
  static DistributionKind student_t(long df);
};

struct Quantile {
  double probability = 0.0;  // in (0,1)
  double value = 0.0;        // cdf(kind, value) == probability up to inversion tolerance
};

// ln Gamma(x) for x > 0. Lanczos approximation, g=7 with 9 coefficients;
// the reflection formula covers x < 1/2.
double ln_gamma(double x);

// Regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x) for a > 0,
// x >= 0. Series expansion for x < a+1, continued fraction (modified Lentz)
// otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a,b) for x in [0,1], a,b > 0.
double incomplete_beta(double a, double b, double x);

// Error function pair, evaluated through the incomplete gamma:
// erf(x) = sgn(x) P(1/2, x^2), erfc(x) = Q(1/2, x^2) for x >= 0.
double erf(double x);
double erfc(double x);

double pdf(const DistributionKind& kind, double x);
double cdf(const DistributionKind& kind, double x);

// Inverse CDF by geometric bracket expansion from the median, bisection, and
// one Newton polish step. Requires 0 < p < 1.
double quantile(const DistributionKind& kind, double p);
Quantile quantile_point(const DistributionKind& kind, double p);

}  // namespace confdom
