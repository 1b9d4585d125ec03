#pragma once

#include <cstdint>

#include "confdom/confidence.hpp"
#include "confdom/measurement.hpp"

namespace confdom {

enum class CoverageCase { MeanKnownSigma, Variance, VarianceAlphaPoint, MeanT, MeanDiff };

// A repeated-measurement experiment: J independent samples from the true
// state, a confidence domain per sample, and a count of how often the domain
// captures the targeted quantity of the true state.
struct CoverageExperiment {
  CoverageCase kind = CoverageCase::MeanKnownSigma;
  NormalState state;        // true state (x side)
  NormalState state2;       // y side, MeanDiff only
  int n = 0;
  int m = 0;                // MeanDiff only
  double gamma = 0.95;
  EstimatorKind estimator;  // Variance only
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

struct CoverageReport {
  std::int64_t hits = 0;
  std::int64_t trials = 0;
  double fraction = 0.0;
  double gamma = 0.0;
  double std_err = 0.0;           // sqrt(gamma (1-gamma) / trials)
  std::int64_t degenerate = 0;    // degenerate samples, counted as misses
};

// Runs the experiment. Trial j draws from the stream derive_stream(seed, j),
// so the report is deterministic in the seed and the hit total is invariant
// under any partitioning of trials across threads. max_threads <= 0 uses the
// hardware concurrency.
CoverageReport run_coverage(const CoverageExperiment& exp, int max_threads = 0);

}  // namespace confdom
