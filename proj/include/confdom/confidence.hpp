#pragma once

#include <functional>
#include <variant>

#include "confdom/measurement.hpp"

namespace confdom {

// Geometry of a confidence domain, either in the (mu, sigma) state space or
// in a scalar parameter space Theta.

// { (mu, sigma) : |mu - center| <= slope * sigma }
struct MeanCone {
  double center = 0.0;
  double slope = 0.0;  // > 0
};

// { (mu, sigma) : lo <= sigma^2 <= hi }, mu unrestricted
struct VarianceBand {
  double lo = 0.0;  // >= 0
  double hi = 0.0;  // > lo
};

// { theta : lo <= theta <= hi }
struct ThetaInterval {
  double lo = 0.0;
  double hi = 0.0;
};

bool contains(const MeanCone& cone, const NormalState& state);
bool contains(const VarianceBand& band, const NormalState& state);
bool contains(const ThetaInterval& interval, double theta);

using ConfidenceDomain = std::variant<MeanCone, VarianceBand, ThetaInterval>;

// The cut of a mean cone at a declared spread: center +- slope * sigma.
ThetaInterval sigma_slice(const MeanCone& cone, double sigma);

// The radius eta such that the estimate lands within semi-distance eta of
// the targeted quantity with probability gamma. depends_on_state records
// whether the radius varies with the state the threshold was computed at.
struct EtaThreshold {
  double eta = 0.0;
  double gamma = 0.0;
  bool depends_on_state = false;
};

enum class EstimatorTag { Mle, Unbiased, Scaled };

// Which spread statistic the variance construction uses: sqrt(sumsq / a)
// with a = n (Mle), a = n-1 (Unbiased), or a = c n (Scaled).
struct EstimatorKind {
  EstimatorTag tag = EstimatorTag::Mle;
  double c = 1.0;  // Scaled only, > 0

  static EstimatorKind mle();
  static EstimatorKind unbiased();
  static EstimatorKind scaled(double c);

  double df_scale(int n) const;
};

enum class SemiDistanceTag { D1, D2, D3, TMean };

// The semi-distance governing a domain:
//   D1     |mu_1 - mu_2|
//   D2     |ln sigma_1 - ln sigma_2|
//   D3     |H(sigma_1) - H(sigma_2)| for a strictly increasing antiderivative
//          H of a positive weight h on R_+
//   TMean  |theta_1 - theta_2| / (unbiased_sigma(x)/sqrt(n)), sample-dependent
struct SemiDistanceSpec {
  SemiDistanceTag tag = SemiDistanceTag::D2;
  std::function<double(double)> antideriv;  // D3 only

  static SemiDistanceSpec d1();
  static SemiDistanceSpec d2();
  static SemiDistanceSpec d3(std::function<double(double)> antideriv);
  static SemiDistanceSpec t_mean();
};

// State-space semi-distances (D1, D2, D3).
double semi_distance(const SemiDistanceSpec& spec, const NormalState& a, const NormalState& b);
// Sample-dependent semi-distance on Theta = R (TMean).
double semi_distance(const SemiDistanceSpec& spec, const Sample& x, double theta1, double theta2);

// eta = (sigma/sqrt(n)) z((1+gamma)/2): the D1 radius at a known spread.
EtaThreshold eta_mean_known_sigma(double gamma, int n, double sigma);

// The unique eta > 0 with
//   cdf(chi2_{n-1}, a e^{2 eta}) - cdf(chi2_{n-1}, a e^{-2 eta}) = gamma,
// a = df_scale; solved by monotone bisection. This symmetric-in-log equation
// couples both limits through one eta and is not the equal-tails condition.
// The radius depends only on gamma and n, never on the state.
EtaThreshold eta_log_sigma(double gamma, int n, double df_scale);

// D3 radius at `state`: smallest eta with
//   P(|H(spread of X) - H(sigma)| <= eta) >= gamma,
// the spread being sigma sqrt(chi2_{n-1}/n). H is inverted numerically;
// targets outside its range clamp the ball to (0, inf) ends.
EtaThreshold eta_generic(double gamma, int n, const SemiDistanceSpec& spec, const NormalState& state);

// Interval builders. Degenerate samples (sumsq = 0) raise degenerate_error
// wherever the construction divides by the sample spread.
ConfidenceDomain interval_mean_known_sigma(const Sample& s, double gamma, double sigma);
ConfidenceDomain interval_variance(const Sample& s, double gamma, const EstimatorKind& estimator);
ConfidenceDomain interval_variance_alpha_point(const Sample& s, double gamma);
ConfidenceDomain interval_mean_diff(const TwoSample& ts, double gamma, double sigma1, double sigma2);
ConfidenceDomain interval_mean_t(const Sample& s, double gamma);

// The scale c for which the Scaled variance band reproduces the equal-tails
// (alpha-point) band exactly: c = sqrt(chi2_lo * chi2_hi) / n.
double alpha_point_reconciliation_c(double gamma, int n);

// Shared endpoint arithmetic, used by the interval builders and the coverage
// driver so both produce bit-identical domains.
MeanCone mean_cone_from_mean(double mean, int n, double z);
VarianceBand variance_band_from_sumsq(double sumsq, double df_scale, double eta);
VarianceBand alpha_band_from_sumsq(double sumsq, double chi2_lo, double chi2_hi);
ThetaInterval interval_from_center(double center, double half_width);
ThetaInterval t_interval_from_stats(double mean, double sumsq, int n, double t_quantile);

}  // namespace confdom
