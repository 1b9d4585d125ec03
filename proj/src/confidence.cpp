#include "confdom/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "confdom/errors.hpp"
#include "confdom/specfun.hpp"

namespace confdom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("confidence level must lie in (0,1)");
}

double upper_quantile_normal(double gamma) {
  return quantile(DistributionKind::std_normal(), (1.0 + gamma) / 2.0);
}

// chi-squared CDF that tolerates the overflowed/underflowed arguments the
// e^{+-2 eta} scaling can produce.
double chi2_cdf_clamped(long df, double x) {
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return cdf(DistributionKind::chi_squared(df), x);
}

// Smallest eta > 0 with coverage(eta) >= gamma for a continuous, strictly
// increasing coverage function rising from 0 toward 1; bisection on a
// geometrically expanded bracket.
template <typename Coverage>
double solve_eta(double gamma, Coverage&& coverage) {
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 80 && coverage(hi) < gamma; ++i) hi *= 2.0;
  if (coverage(hi) < gamma)
    throw std::runtime_error("eta bracket expansion failed to reach the confidence level");
  for (int i = 0; i < 300; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (coverage(mid) < gamma) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-13) break;
  }
  return 0.5 * (lo + hi);
}

// Inverse of a strictly increasing H: R_+ -> R. Returns 0 when the target
// lies below the range (the ball reaches the sigma = 0 wall) and +infinity
// when it lies above (the ball is unbounded).
double invert_increasing(const std::function<double(double)>& h_antideriv, double target,
                         double hint) {
  double hi = hint;
  double prev = h_antideriv(hi);
  int steps = 0;
  while (prev < target) {
    double next_hi = hi * 2.0;
    double value = h_antideriv(next_hi);
    if (value < prev)
      throw std::invalid_argument("antiderivative is not increasing on (0, inf)");
    hi = next_hi;
    prev = value;
    if (std::isinf(hi) || ++steps > 1200) {
      if (prev < target) return kInf;
      break;
    }
  }
  double lo = hint;
  prev = h_antideriv(lo);
  steps = 0;
  while (prev > target) {
    double next_lo = lo * 0.5;
    double value = h_antideriv(next_lo);
    if (value > prev)
      throw std::invalid_argument("antiderivative is not increasing on (0, inf)");
    lo = next_lo;
    prev = value;
    if (lo == 0.0 || ++steps > 1200) {
      if (prev > target) return 0.0;
      break;
    }
  }
  for (int i = 0; i < 300; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (h_antideriv(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

struct VarianceInputs {
  int n = 0;
  double sumsq = 0.0;
};

VarianceInputs variance_inputs(const Sample& s, const char* who) {
  if (s.n() < 2) throw std::invalid_argument(std::string(who) + " needs n >= 2");
  double sumsq = sample_sumsq(s);
  if (sumsq <= 0.0)
    throw degenerate_error(std::string(who) + ": constant sample has no spread");
  return {s.n(), sumsq};
}

}  // namespace

bool contains(const MeanCone& cone, const NormalState& state) {
  return std::fabs(state.mu - cone.center) <= cone.slope * state.sigma;
}

bool contains(const VarianceBand& band, const NormalState& state) {
  double var = state.sigma * state.sigma;
  return band.lo <= var && var <= band.hi;
}

bool contains(const ThetaInterval& interval, double theta) {
  return interval.lo <= theta && theta <= interval.hi;
}

ThetaInterval sigma_slice(const MeanCone& cone, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma_slice needs sigma > 0");
  double half = cone.slope * sigma;
  return {cone.center - half, cone.center + half};
}

EstimatorKind EstimatorKind::mle() { return {EstimatorTag::Mle, 1.0}; }

EstimatorKind EstimatorKind::unbiased() { return {EstimatorTag::Unbiased, 1.0}; }

EstimatorKind EstimatorKind::scaled(double c) {
  if (!std::isfinite(c) || c <= 0.0)
    throw std::invalid_argument("scaled estimator needs c > 0");
  return {EstimatorTag::Scaled, c};
}

double EstimatorKind::df_scale(int n) const {
  switch (tag) {
    case EstimatorTag::Mle:
      return static_cast<double>(n);
    case EstimatorTag::Unbiased:
      return static_cast<double>(n - 1);
    case EstimatorTag::Scaled:
      return c * static_cast<double>(n);
  }
  throw std::invalid_argument("unknown estimator kind");
}

SemiDistanceSpec SemiDistanceSpec::d1() { return {SemiDistanceTag::D1, {}}; }

SemiDistanceSpec SemiDistanceSpec::d2() { return {SemiDistanceTag::D2, {}}; }

SemiDistanceSpec SemiDistanceSpec::d3(std::function<double(double)> antideriv) {
  if (!antideriv) throw std::invalid_argument("d3 needs an antiderivative");
  return {SemiDistanceTag::D3, std::move(antideriv)};
}

SemiDistanceSpec SemiDistanceSpec::t_mean() { return {SemiDistanceTag::TMean, {}}; }

double semi_distance(const SemiDistanceSpec& spec, const NormalState& a, const NormalState& b) {
  switch (spec.tag) {
    case SemiDistanceTag::D1:
      return std::fabs(a.mu - b.mu);
    case SemiDistanceTag::D2:
      return std::fabs(std::log(a.sigma) - std::log(b.sigma));
    case SemiDistanceTag::D3:
      return std::fabs(spec.antideriv(a.sigma) - spec.antideriv(b.sigma));
    case SemiDistanceTag::TMean:
      throw std::invalid_argument("the t semi-distance needs a sample; use the Theta overload");
  }
  throw std::invalid_argument("unknown semi-distance");
}

double semi_distance(const SemiDistanceSpec& spec, const Sample& x, double theta1,
                     double theta2) {
  if (spec.tag != SemiDistanceTag::TMean)
    throw std::invalid_argument("only the t semi-distance acts on Theta with a sample");
  double spread = unbiased_sigma(x);
  if (spread <= 0.0)
    throw degenerate_error("t semi-distance: constant sample has no spread");
  return std::fabs(theta1 - theta2) / (spread / std::sqrt(static_cast<double>(x.n())));
}

EtaThreshold eta_mean_known_sigma(double gamma, int n, double sigma) {
  check_gamma(gamma);
  if (n < 1) throw std::invalid_argument("eta_mean_known_sigma needs n >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("eta_mean_known_sigma needs sigma > 0");
  double eta = sigma / std::sqrt(static_cast<double>(n)) * upper_quantile_normal(gamma);
  return {eta, gamma, true};
}

EtaThreshold eta_log_sigma(double gamma, int n, double df_scale) {
  check_gamma(gamma);
  if (n < 2) throw std::invalid_argument("eta_log_sigma needs n >= 2");
  if (!std::isfinite(df_scale) || df_scale <= 0.0)
    throw std::invalid_argument("eta_log_sigma needs df_scale > 0");
  long df = n - 1;
  auto coverage = [df, df_scale](double eta) {
    return chi2_cdf_clamped(df, df_scale * std::exp(2.0 * eta)) -
           chi2_cdf_clamped(df, df_scale * std::exp(-2.0 * eta));
  };
  return {solve_eta(gamma, coverage), gamma, false};
}

EtaThreshold eta_generic(double gamma, int n, const SemiDistanceSpec& spec,
                         const NormalState& state) {
  check_gamma(gamma);
  if (n < 2) throw std::invalid_argument("eta_generic needs n >= 2");
  if (spec.tag != SemiDistanceTag::D3 || !spec.antideriv)
    throw std::invalid_argument("eta_generic needs a D3 semi-distance with an antiderivative");
  const auto& h_antideriv = spec.antideriv;
  double sigma = state.sigma;
  double center = h_antideriv(sigma);
  long df = n - 1;
  double nd = static_cast<double>(n);
  auto coverage = [&h_antideriv, center, sigma, df, nd](double eta) {
    double sigma_hi = invert_increasing(h_antideriv, center + eta, sigma);
    double sigma_lo = invert_increasing(h_antideriv, center - eta, sigma);
    double upper =
        std::isinf(sigma_hi) ? 1.0 : chi2_cdf_clamped(df, nd * (sigma_hi / sigma) * (sigma_hi / sigma));
    double lower =
        sigma_lo == 0.0 ? 0.0 : chi2_cdf_clamped(df, nd * (sigma_lo / sigma) * (sigma_lo / sigma));
    return upper - lower;
  };
  return {solve_eta(gamma, coverage), gamma, true};
}

MeanCone mean_cone_from_mean(double mean, int n, double z) {
  return {mean, z / std::sqrt(static_cast<double>(n))};
}

VarianceBand variance_band_from_sumsq(double sumsq, double df_scale, double eta) {
  return {std::exp(-2.0 * eta) / df_scale * sumsq, std::exp(2.0 * eta) / df_scale * sumsq};
}

VarianceBand alpha_band_from_sumsq(double sumsq, double chi2_lo, double chi2_hi) {
  return {sumsq / chi2_hi, sumsq / chi2_lo};
}

ThetaInterval interval_from_center(double center, double half_width) {
  return {center - half_width, center + half_width};
}

ThetaInterval t_interval_from_stats(double mean, double sumsq, int n, double t_quantile) {
  double spread = std::sqrt(sumsq / static_cast<double>(n - 1));
  return interval_from_center(mean, spread / std::sqrt(static_cast<double>(n)) * t_quantile);
}

ConfidenceDomain interval_mean_known_sigma(const Sample& s, double gamma, double sigma) {
  check_gamma(gamma);
  if (!(sigma > 0.0))
    throw std::invalid_argument("interval_mean_known_sigma needs sigma > 0");
  return mean_cone_from_mean(sample_mean(s), s.n(), upper_quantile_normal(gamma));
}

ConfidenceDomain interval_variance(const Sample& s, double gamma, const EstimatorKind& estimator) {
  check_gamma(gamma);
  auto [n, sumsq] = variance_inputs(s, "interval_variance");
  double scale = estimator.df_scale(n);
  return variance_band_from_sumsq(sumsq, scale, eta_log_sigma(gamma, n, scale).eta);
}

ConfidenceDomain interval_variance_alpha_point(const Sample& s, double gamma) {
  check_gamma(gamma);
  auto [n, sumsq] = variance_inputs(s, "interval_variance_alpha_point");
  auto chi2 = DistributionKind::chi_squared(n - 1);
  return alpha_band_from_sumsq(sumsq, quantile(chi2, (1.0 - gamma) / 2.0),
                               quantile(chi2, (1.0 + gamma) / 2.0));
}

double alpha_point_reconciliation_c(double gamma, int n) {
  check_gamma(gamma);
  if (n < 2) throw std::invalid_argument("alpha_point_reconciliation_c needs n >= 2");
  auto chi2 = DistributionKind::chi_squared(n - 1);
  double lo = quantile(chi2, (1.0 - gamma) / 2.0);
  double hi = quantile(chi2, (1.0 + gamma) / 2.0);
  return std::sqrt(lo * hi) / static_cast<double>(n);
}

ConfidenceDomain interval_mean_diff(const TwoSample& ts, double gamma, double sigma1,
                                    double sigma2) {
  check_gamma(gamma);
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0))
    throw std::invalid_argument("interval_mean_diff needs positive sigmas");
  double half_width = std::sqrt(sigma1 * sigma1 / static_cast<double>(ts.x.n()) +
                                sigma2 * sigma2 / static_cast<double>(ts.y.n())) *
                      upper_quantile_normal(gamma);
  return interval_from_center(sample_mean(ts.x) - sample_mean(ts.y), half_width);
}

ConfidenceDomain interval_mean_t(const Sample& s, double gamma) {
  check_gamma(gamma);
  auto [n, sumsq] = variance_inputs(s, "interval_mean_t");
  double t = quantile(DistributionKind::student_t(n - 1), (1.0 + gamma) / 2.0);
  return t_interval_from_stats(sample_mean(s), sumsq, n, t);
}

}  // namespace confdom
