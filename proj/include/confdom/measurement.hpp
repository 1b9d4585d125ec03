#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace confdom {

class NormalRng;

// A point omega = (mu, sigma) in the state space R x R_+.
struct NormalState {
  double mu = 0.0;
  double sigma = 1.0;

  NormalState() = default;
  NormalState(double mu_arg, double sigma_arg);  // requires finite mu, sigma > 0
};

// An ordered tuple of n >= 1 finite measured values.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  int n() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Measured value of a parallel measurement: two independent tuples.
struct TwoSample {
  Sample x;
  Sample y;
};

// Plain statistics over a contiguous buffer; the Sample wrappers below and
// the coverage driver share these so they produce bit-identical values.
double mean_of(std::span<const double> values);
double sumsq_of(std::span<const double> values);  // sum of squared deviations from the mean

double sample_mean(const Sample& s);
double sample_sumsq(const Sample& s);

// Maximum-likelihood spread sqrt(sumsq/n); 0 for constant samples.
double mle_sigma(const Sample& s);

// Unbiased spread sqrt(sumsq/(n-1)) = sqrt(n/(n-1)) * mle_sigma; needs n >= 2.
double unbiased_sigma(const Sample& s);

// Fills `out` with independent draws from the normal law at `state`.
void draw_normal(NormalRng& rng, const NormalState& state, std::span<double> out);

// n independent draws, deterministic in the seed.
Sample simulate_measurement(const NormalState& state, int n, std::uint64_t seed);

// P(sample mean of n draws lands in [a,b]); the image law is normal with
// location mu and spread sigma/sqrt(n). Endpoints may be +-infinity.
double image_prob_mean(const NormalState& state, int n, double a, double b);

// P(sum of squared deviations lands in [a,b]), 0 <= a <= b, n >= 2; the
// image law is sigma^2 times a chi-squared with n-1 degrees of freedom.
double image_prob_sumsq(const NormalState& state, int n, double a, double b);

}  // namespace confdom
