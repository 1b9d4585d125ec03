#include "confdom/estimation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "confdom/errors.hpp"
#include "confdom/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace confdom;

namespace {

bool close_abs(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

Sample make(std::initializer_list<double> values) {
  return Sample(std::vector<double>(values));
}

// Fresh random sample with a spread bounded away from zero, so that numeric
// derivatives at the optimum stay well conditioned.
Sample random_sample(NormalRng& rng, int n) {
  for (;;) {
    std::vector<double> values(n);
    double mu = (rng.uniform01() - 0.5) * 10.0;
    double sigma = 0.5 + 1.5 * rng.uniform01();
    for (double& v : values) v = rng.normal(mu, sigma);
    Sample s(values);
    if (mle_sigma(s) > 0.05) return s;
  }
}

double grad_norm_at_full_mle(const Sample& s) {
  auto full = mle(s, ConstraintSet::full());
  double mu = full.state.mu;
  double sigma = full.state.sigma;
  double h = 1e-6;
  double dmu = (log_likelihood(s, NormalState(mu + h, sigma)) -
                log_likelihood(s, NormalState(mu - h, sigma))) /
               (2.0 * h);
  double dsigma = (log_likelihood(s, NormalState(mu, sigma + h)) -
                   log_likelihood(s, NormalState(mu, sigma - h))) /
                  (2.0 * h);
  return std::sqrt(dmu * dmu + dsigma * dsigma);
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("log likelihood on worked examples") {
  CHECK(close_abs(log_likelihood(make({0}), NormalState(0, 1)), -0.91893853320467274,
                  1e-14));

  // Shifting data and location together leaves the value unchanged.
  Sample s = make({0.4, -1.2, 2.2, 0.9});
  double base = log_likelihood(s, NormalState(0.3, 1.4));
  std::vector<double> shifted;
  for (double v : s.values()) shifted.push_back(v + 11.0);
  CHECK(close_abs(log_likelihood(Sample(shifted), NormalState(11.3, 1.4)), base, 1e-10));

  double direct = -3.0 * std::log(std::sqrt(2.0 * oracles::kPi) * std::sqrt(2.0 / 3.0)) -
                  3.0 / 2.0;
  CHECK(close_abs(log_likelihood(make({1, 2, 3}), NormalState(2.0, std::sqrt(2.0 / 3.0))),
                  direct, 1e-13));
  CHECK(close_abs(direct, -3.6486179374517717, 1e-13));

  CHECK_THROWS_AS(log_likelihood(s, NormalState{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("maximum likelihood under the three admissible sets") {
  auto full = mle(make({1, 2, 3}), ConstraintSet::full());
  CHECK(full.state.mu == 2.0);
  CHECK(close_abs(full.state.sigma, std::sqrt(2.0 / 3.0), 1e-15));

  auto fixed_sigma = mle(make({1, 2, 3}), ConstraintSet::fixed_sigma(1.0));
  CHECK(fixed_sigma.state.mu == 2.0);
  CHECK(fixed_sigma.state.sigma == 1.0);

  auto fixed_mu = mle(make({1, 2, 3}), ConstraintSet::fixed_mu(0.0));
  CHECK(fixed_mu.state.mu == 0.0);
  CHECK(close_abs(fixed_mu.state.sigma, std::sqrt(14.0 / 3.0), 1e-15));

  for (const auto& result : {full, fixed_sigma, fixed_mu}) {
    CHECK(close_abs(result.log_likelihood, log_likelihood(make({1, 2, 3}), result.state),
                    1e-12));
  }
}

TEST_CASE("degenerate samples are refused, not silently collapsed") {
  CHECK_THROWS_AS(mle(make({4, 4, 4}), ConstraintSet::full()), degenerate_error);
  CHECK_THROWS_AS(mle(make({2, 2}), ConstraintSet::fixed_mu(2.0)), degenerate_error);
  // A constant sample is fine when sigma is pinned by the admissible set.
  auto pinned = mle(make({4, 4, 4}), ConstraintSet::fixed_sigma(0.5));
  CHECK(pinned.state.mu == 4.0);
  CHECK(pinned.state.sigma == 0.5);
  CHECK_THROWS_AS(ConstraintSet::fixed_sigma(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ConstraintSet::fixed_sigma(-2.0), std::invalid_argument);
}

TEST_CASE("the estimate maximizes the likelihood over its admissible set") {
  NormalRng rng(31337);
  long violations = 0;
  for (int round = 0; round < 200; ++round) {
    int n = 2 + static_cast<int>(rng.uniform01() * 9);
    Sample s = random_sample(rng, n);

    // 1000 probes per admissible set: a mesh around the optimum plus random
    // excursions, none of which may beat the returned estimate.
    auto full = mle(s, ConstraintSet::full());
    for (int i = -15; i <= 15; ++i) {
      for (int k = -15; k <= 15; ++k) {
        if (i == 0 && k == 0) continue;
        double mu = full.state.mu + 0.2 * i;
        double sigma = full.state.sigma * std::exp(0.15 * k);
        if (log_likelihood(s, NormalState(mu, sigma)) > full.log_likelihood + 1e-9)
          ++violations;
      }
    }
    for (int probe = 0; probe < 40; ++probe) {
      double mu = full.state.mu + (rng.uniform01() - 0.5) * 8.0;
      double sigma = full.state.sigma * std::exp((rng.uniform01() - 0.5) * 5.0);
      if (log_likelihood(s, NormalState(mu, sigma)) > full.log_likelihood + 1e-9)
        ++violations;
    }

    double sigma1 = 0.3 + 2.0 * rng.uniform01();
    auto pinned_sigma = mle(s, ConstraintSet::fixed_sigma(sigma1));
    CHECK(pinned_sigma.state.sigma == sigma1);
    for (int probe = 0; probe < 1000; ++probe) {
      double mu = probe < 500 ? pinned_sigma.state.mu + 0.01 * (probe - 250)
                              : pinned_sigma.state.mu + (rng.uniform01() - 0.5) * 10.0;
      if (log_likelihood(s, NormalState(mu, sigma1)) > pinned_sigma.log_likelihood + 1e-9)
        ++violations;
    }

    double mu1 = (rng.uniform01() - 0.5) * 8.0;
    auto pinned_mu = mle(s, ConstraintSet::fixed_mu(mu1));
    CHECK(pinned_mu.state.mu == mu1);
    for (int probe = 0; probe < 1000; ++probe) {
      double sigma = probe < 500
                         ? pinned_mu.state.sigma * std::exp(0.01 * (probe - 250))
                         : pinned_mu.state.sigma * std::exp((rng.uniform01() - 0.5) * 6.0);
      if (log_likelihood(s, NormalState(mu1, sigma)) > pinned_mu.log_likelihood + 1e-9)
        ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("the full estimate is a stationary point") {
  NormalRng rng(555);
  for (int round = 0; round < 40; ++round) {
    int n = 2 + static_cast<int>(rng.uniform01() * 9);
    CHECK(grad_norm_at_full_mle(random_sample(rng, n)) <= 1e-4);
  }
}

}  // TEST_SUITE
