#include "confdom/estimation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "confdom/errors.hpp"

namespace confdom {

ConstraintSet ConstraintSet::full() { return {ConstraintTag::Full, 0.0}; }

ConstraintSet ConstraintSet::fixed_sigma(double sigma1) {
  if (!std::isfinite(sigma1) || sigma1 <= 0.0)
    throw std::invalid_argument("fixed sigma must be positive");
  return {ConstraintTag::FixedSigma, sigma1};
}

ConstraintSet ConstraintSet::fixed_mu(double mu1) {
  if (!std::isfinite(mu1)) throw std::invalid_argument("fixed mu must be finite");
  return {ConstraintTag::FixedMu, mu1};
}

double log_likelihood(const Sample& s, const NormalState& state) {
  if (!(state.sigma > 0.0)) throw std::invalid_argument("log_likelihood needs sigma > 0");
  double quad = 0.0;
  for (double v : s.values()) {
    double d = v - state.mu;
    quad += d * d;
  }
  double n = static_cast<double>(s.n());
  return -n * std::log(std::sqrt(2.0 * std::numbers::pi) * state.sigma) -
         quad / (2.0 * state.sigma * state.sigma);
}

MleResult mle(const Sample& s, const ConstraintSet& k) {
  switch (k.tag) {
    case ConstraintTag::Full: {
      double sumsq = sample_sumsq(s);
      if (sumsq <= 0.0)
        throw degenerate_error("constant sample: the maximizing sigma is not attained");
      NormalState state(sample_mean(s), std::sqrt(sumsq / static_cast<double>(s.n())));
      return {state, log_likelihood(s, state)};
    }
    case ConstraintTag::FixedSigma: {
      NormalState state(sample_mean(s), k.value);
      return {state, log_likelihood(s, state)};
    }
    case ConstraintTag::FixedMu: {
      double quad = 0.0;
      for (double v : s.values()) {
        double d = v - k.value;
        quad += d * d;
      }
      if (quad <= 0.0)
        throw degenerate_error("every value equals the fixed mu: sigma is not attained");
      NormalState state(k.value, std::sqrt(quad / static_cast<double>(s.n())));
      return {state, log_likelihood(s, state)};
    }
  }
  throw std::invalid_argument("unknown constraint set");
}

}  // namespace confdom
