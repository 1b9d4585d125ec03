#pragma once

#include "confdom/measurement.hpp"

namespace confdom {

enum class ConstraintTag { Full, FixedSigma, FixedMu };

// The admissible set K the unknown state is known to lie in: the whole state
// space, a fixed-sigma line, or a fixed-mu half line.
struct ConstraintSet {
  ConstraintTag tag = ConstraintTag::Full;
  double value = 0.0;  // sigma1 for FixedSigma, mu1 for FixedMu

  static ConstraintSet full();
  static ConstraintSet fixed_sigma(double sigma1);  // requires sigma1 > 0
  static ConstraintSet fixed_mu(double mu1);
};

struct MleResult {
  NormalState state;
  double log_likelihood = 0.0;
};

// Log of the normal likelihood: -n ln(sqrt(2 pi) sigma) - sum (x_k - mu)^2 / (2 sigma^2).
double log_likelihood(const Sample& s, const NormalState& state);

// Maximum-likelihood state over K. Throws degenerate_error when the
// maximizing sigma would be 0 (constant sample under Full, or every value
// equal to mu1 under FixedMu): the supremum is not attained in R_+.
MleResult mle(const Sample& s, const ConstraintSet& k);

}  // namespace confdom
