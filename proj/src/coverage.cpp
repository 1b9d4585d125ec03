#include "confdom/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "confdom/rng.hpp"
#include "confdom/specfun.hpp"

namespace confdom {

namespace {

// Construction constants that do not depend on the measured value; computed
// once per experiment so trials only do sample statistics and comparisons.
struct TrialPlan {
  CoverageCase kind;
  NormalState state;
  NormalState state2;
  int n = 0;
  int m = 0;
  double z = 0.0;          // normal quantile (MeanKnownSigma, MeanDiff)
  double eta = 0.0;        // log-spread radius (Variance)
  double df_scale = 0.0;   // chi-squared scale a (Variance)
  double chi2_lo = 0.0;    // equal-tails quantiles (VarianceAlphaPoint)
  double chi2_hi = 0.0;
  double t = 0.0;          // t quantile (MeanT)
  double half_width = 0.0; // fixed interval half width (MeanDiff)
  double target_diff = 0.0;
};

TrialPlan make_plan(const CoverageExperiment& exp) {
  TrialPlan plan;
  plan.kind = exp.kind;
  plan.state = exp.state;
  plan.state2 = exp.state2;
  plan.n = exp.n;
  plan.m = exp.m;
  switch (exp.kind) {
    case CoverageCase::MeanKnownSigma:
      if (exp.n < 1) throw std::invalid_argument("coverage needs n >= 1");
      plan.z = quantile(DistributionKind::std_normal(), (1.0 + exp.gamma) / 2.0);
      break;
    case CoverageCase::Variance: {
      if (exp.n < 2) throw std::invalid_argument("variance coverage needs n >= 2");
      plan.df_scale = exp.estimator.df_scale(exp.n);
      plan.eta = eta_log_sigma(exp.gamma, exp.n, plan.df_scale).eta;
      break;
    }
    case CoverageCase::VarianceAlphaPoint: {
      if (exp.n < 2) throw std::invalid_argument("variance coverage needs n >= 2");
      auto chi2 = DistributionKind::chi_squared(exp.n - 1);
      plan.chi2_lo = quantile(chi2, (1.0 - exp.gamma) / 2.0);
      plan.chi2_hi = quantile(chi2, (1.0 + exp.gamma) / 2.0);
      break;
    }
    case CoverageCase::MeanT:
      if (exp.n < 2) throw std::invalid_argument("t coverage needs n >= 2");
      plan.t = quantile(DistributionKind::student_t(exp.n - 1), (1.0 + exp.gamma) / 2.0);
      break;
    case CoverageCase::MeanDiff: {
      if (exp.n < 1 || exp.m < 1) throw std::invalid_argument("coverage needs n, m >= 1");
      plan.z = quantile(DistributionKind::std_normal(), (1.0 + exp.gamma) / 2.0);
      double s1 = exp.state.sigma;
      double s2 = exp.state2.sigma;
      plan.half_width = std::sqrt(s1 * s1 / static_cast<double>(exp.n) +
                                  s2 * s2 / static_cast<double>(exp.m)) *
                        plan.z;
      plan.target_diff = exp.state.mu - exp.state2.mu;
      break;
    }
  }
  return plan;
}

struct Tally {
  std::int64_t hits = 0;
  std::int64_t degenerate = 0;
};

// One simulated measurement plus the capture check for pi(omega_0).
void run_trial(const TrialPlan& plan, NormalRng& rng, std::vector<double>& buf_x,
               std::vector<double>& buf_y, Tally& tally) {
  draw_normal(rng, plan.state, buf_x);
  switch (plan.kind) {
    case CoverageCase::MeanKnownSigma: {
      MeanCone cone = mean_cone_from_mean(mean_of(buf_x), plan.n, plan.z);
      tally.hits += contains(cone, plan.state) ? 1 : 0;
      return;
    }
    case CoverageCase::Variance: {
      double sumsq = sumsq_of(buf_x);
      if (sumsq <= 0.0) {
        ++tally.degenerate;
        return;
      }
      VarianceBand band = variance_band_from_sumsq(sumsq, plan.df_scale, plan.eta);
      tally.hits += contains(band, plan.state) ? 1 : 0;
      return;
    }
    case CoverageCase::VarianceAlphaPoint: {
      double sumsq = sumsq_of(buf_x);
      if (sumsq <= 0.0) {
        ++tally.degenerate;
        return;
      }
      VarianceBand band = alpha_band_from_sumsq(sumsq, plan.chi2_lo, plan.chi2_hi);
      tally.hits += contains(band, plan.state) ? 1 : 0;
      return;
    }
    case CoverageCase::MeanT: {
      double sumsq = sumsq_of(buf_x);
      if (sumsq <= 0.0) {
        ++tally.degenerate;
        return;
      }
      ThetaInterval iv = t_interval_from_stats(mean_of(buf_x), sumsq, plan.n, plan.t);
      tally.hits += contains(iv, plan.state.mu) ? 1 : 0;
      return;
    }
    case CoverageCase::MeanDiff: {
      draw_normal(rng, plan.state2, buf_y);
      ThetaInterval iv =
          interval_from_center(mean_of(buf_x) - mean_of(buf_y), plan.half_width);
      tally.hits += contains(iv, plan.target_diff) ? 1 : 0;
      return;
    }
  }
}

Tally run_range(const TrialPlan& plan, std::uint64_t seed, std::int64_t begin,
                std::int64_t end) {
  Tally tally;
  std::vector<double> buf_x(static_cast<std::size_t>(plan.n));
  std::vector<double> buf_y(
      plan.kind == CoverageCase::MeanDiff ? static_cast<std::size_t>(plan.m) : 0);
  for (std::int64_t j = begin; j < end; ++j) {
    NormalRng rng(derive_stream(seed, static_cast<std::uint64_t>(j)));
    run_trial(plan, rng, buf_x, buf_y, tally);
  }
  return tally;
}

}  // namespace

CoverageReport run_coverage(const CoverageExperiment& exp, int max_threads) {
  if (exp.trials < 1) throw std::invalid_argument("coverage needs at least one trial");
  if (!(exp.gamma > 0.0 && exp.gamma < 1.0))
    throw std::invalid_argument("confidence level must lie in (0,1)");
  TrialPlan plan = make_plan(exp);

  int threads = max_threads > 0 ? max_threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (threads > 64) threads = 64;
  if (exp.trials < 4 * static_cast<std::int64_t>(threads)) threads = 1;

  Tally total;
  if (threads == 1) {
    total = run_range(plan, exp.seed, 0, exp.trials);
  } else {
    std::vector<Tally> parts(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    std::int64_t chunk = (exp.trials + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::int64_t begin = static_cast<std::int64_t>(t) * chunk;
      std::int64_t end = std::min(begin + chunk, exp.trials);
      if (begin >= end) break;
      pool.emplace_back([&plan, &parts, seed = exp.seed, t, begin, end] {
        parts[static_cast<std::size_t>(t)] = run_range(plan, seed, begin, end);
      });
    }
    for (auto& th : pool) th.join();
    for (const Tally& part : parts) {
      total.hits += part.hits;
      total.degenerate += part.degenerate;
    }
  }

  CoverageReport report;
  report.hits = total.hits;
  report.trials = exp.trials;
  report.fraction = static_cast<double>(total.hits) / static_cast<double>(exp.trials);
  report.gamma = exp.gamma;
  report.std_err = std::sqrt(exp.gamma * (1.0 - exp.gamma) / static_cast<double>(exp.trials));
  report.degenerate = total.degenerate;
  return report;
}

}  // namespace confdom
