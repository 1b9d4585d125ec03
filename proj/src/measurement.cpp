#include "confdom/measurement.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "confdom/rng.hpp"
#include "confdom/specfun.hpp"

namespace confdom {

namespace {

// Standard normal CDF with the argument allowed to be +-infinity; values past
// +-40 are indistinguishable from the limits at double precision.
double std_normal_cdf_clamped(double z) {
  if (std::isnan(z)) throw std::invalid_argument("interval endpoint produced NaN");
  if (z >= 40.0) return 1.0;
  if (z <= -40.0) return 0.0;
  return cdf(DistributionKind::std_normal(), z);
}

double chi2_cdf_clamped(long df, double x) {
  if (std::isnan(x)) throw std::invalid_argument("interval endpoint produced NaN");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return cdf(DistributionKind::chi_squared(df), x);
}

}  // namespace

NormalState::NormalState(double mu_arg, double sigma_arg) : mu(mu_arg), sigma(sigma_arg) {
  if (!std::isfinite(mu)) throw std::invalid_argument("state mu must be finite");
  if (!std::isfinite(sigma) || sigma <= 0.0)
    throw std::invalid_argument("state sigma must be positive");
}

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("a sample needs at least one value");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("sample values must be finite");
  }
}

double mean_of(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sumsq_of(std::span<const double> values) {
  double mean = mean_of(values);
  double sum = 0.0;
  for (double v : values) {
    double d = v - mean;
    sum += d * d;
  }
  return sum;
}

double sample_mean(const Sample& s) { return mean_of(s.values()); }

double sample_sumsq(const Sample& s) { return sumsq_of(s.values()); }

double mle_sigma(const Sample& s) {
  return std::sqrt(sample_sumsq(s) / static_cast<double>(s.n()));
}

double unbiased_sigma(const Sample& s) {
  if (s.n() < 2) throw std::invalid_argument("unbiased_sigma needs n >= 2");
  return std::sqrt(sample_sumsq(s) / static_cast<double>(s.n() - 1));
}

void draw_normal(NormalRng& rng, const NormalState& state, std::span<double> out) {
  for (double& v : out) v = rng.normal(state.mu, state.sigma);
}

Sample simulate_measurement(const NormalState& state, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("simulate_measurement needs n >= 1");
  std::vector<double> values(static_cast<std::size_t>(n));
  NormalRng rng(seed);
  draw_normal(rng, state, values);
  return Sample(std::move(values));
}

double image_prob_mean(const NormalState& state, int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("image_prob_mean needs n >= 1");
  if (std::isnan(a) || std::isnan(b) || a > b)
    throw std::invalid_argument("image_prob_mean needs a <= b");
  double scale = std::sqrt(static_cast<double>(n)) / state.sigma;
  return std_normal_cdf_clamped((b - state.mu) * scale) -
         std_normal_cdf_clamped((a - state.mu) * scale);
}

double image_prob_sumsq(const NormalState& state, int n, double a, double b) {
  if (n < 2) throw std::invalid_argument("image_prob_sumsq needs n >= 2");
  if (std::isnan(a) || std::isnan(b) || a < 0.0 || a > b)
    throw std::invalid_argument("image_prob_sumsq needs 0 <= a <= b");
  double inv_var = 1.0 / (state.sigma * state.sigma);
  long df = n - 1;
  return chi2_cdf_clamped(df, b * inv_var) - chi2_cdf_clamped(df, a * inv_var);
}

}  // namespace confdom
