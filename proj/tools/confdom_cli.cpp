#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "confdom/confidence.hpp"
#include "confdom/coverage.hpp"
#include "confdom/errors.hpp"
#include "confdom/estimation.hpp"
#include "confdom/measurement.hpp"
#include "confdom/sample_io.hpp"
#include "confdom/specfun.hpp"
#include "json.hpp"

namespace {

using confdom::DistributionKind;
using confdom::EstimatorKind;
using confdom::MeanCone;
using confdom::Sample;
using confdom::ThetaInterval;
using confdom::TwoSample;
using confdom::VarianceBand;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitCoverage = 4;

std::string fmt6(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

std::string fmt_full(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

void check_cli_gamma(double gamma) {
  if (!(gamma >= 0.5 && gamma <= 0.9999))
    throw std::invalid_argument("--gamma must lie in [0.5, 0.9999]");
}

EstimatorKind parse_estimator(const std::string& text) {
  if (text == "mle") return EstimatorKind::mle();
  if (text == "unbiased") return EstimatorKind::unbiased();
  if (text.rfind("scaled:", 0) == 0) {
    std::string num = text.substr(7);
    std::size_t pos = 0;
    double c = 0.0;
    try {
      c = std::stod(num, &pos);
    } catch (...) {
      throw std::invalid_argument("bad scale in --estimator: " + text);
    }
    if (pos != num.size()) throw std::invalid_argument("bad scale in --estimator: " + text);
    return EstimatorKind::scaled(c);
  }
  throw std::invalid_argument("--estimator must be mle, unbiased, or scaled:<c>");
}

std::string estimator_echo(const EstimatorKind& kind) {
  switch (kind.tag) {
    case confdom::EstimatorTag::Mle:
      return "mle";
    case confdom::EstimatorTag::Unbiased:
      return "unbiased";
    case confdom::EstimatorTag::Scaled:
      return "scaled:" + fmt_full(kind.c);
  }
  return "mle";
}

std::string scalar_text(const Json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_number_float()) return fmt6(v.get<double>());
  return v.dump();
}

// One structured-text record (key: value lines) or a single JSON object.
void emit(const Json& record, bool as_json) {
  if (as_json) {
    std::cout << record.dump() << "\n";
    return;
  }
  for (const auto& [key, value] : record.items()) {
    if (key == "constants" && value.is_object()) {
      for (const auto& [ck, cv] : value.items()) {
        std::cout << "constant." << ck << ": " << scalar_text(cv) << "\n";
      }
    } else {
      std::cout << key << ": " << scalar_text(value) << "\n";
    }
  }
}

int env_thread_cap() {
  const char* raw = std::getenv("CI_DOMAIN_THREADS");
  if (raw == nullptr) return 0;
  char* end = nullptr;
  long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || value < 1) {
    std::cerr << "warning: ignoring CI_DOMAIN_THREADS=\"" << raw
              << "\" (expected a positive integer)\n";
    return 0;
  }
  return static_cast<int>(value);
}

struct IntervalOpts {
  double gamma = 0.95;
  double sigma = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  std::string estimator = "mle";
  std::string data;
  std::string data2;
  bool json = false;
};

int run_interval_mean_known_sigma(const IntervalOpts& opt) {
  check_cli_gamma(opt.gamma);
  Sample s = confdom::load_sample_file(opt.data);
  auto cone =
      std::get<MeanCone>(confdom::interval_mean_known_sigma(s, opt.gamma, opt.sigma));
  ThetaInterval slice = confdom::sigma_slice(cone, opt.sigma);
  double z = confdom::quantile(DistributionKind::std_normal(), (1.0 + opt.gamma) / 2.0);

  Json record;
  record["command"] = "interval mean-known-sigma";
  record["data"] = opt.data;
  record["n"] = s.n();
  record["gamma"] = opt.gamma;
  record["sigma"] = opt.sigma;
  record["domain"] = "mean_cone";
  record["lo"] = slice.lo;
  record["hi"] = slice.hi;
  record["center"] = cone.center;
  record["slope"] = cone.slope;
  record["constants"] = Json{{"z", z}};
  emit(record, opt.json);
  return kExitOk;
}

int run_interval_variance(const IntervalOpts& opt, bool alpha_point) {
  check_cli_gamma(opt.gamma);
  Sample s = confdom::load_sample_file(opt.data);

  Json record;
  record["command"] =
      alpha_point ? "interval variance-alpha-point" : "interval variance";
  record["data"] = opt.data;
  record["n"] = s.n();
  record["gamma"] = opt.gamma;

  Json constants;
  VarianceBand band{};
  if (alpha_point) {
    band = std::get<VarianceBand>(confdom::interval_variance_alpha_point(s, opt.gamma));
    auto chi2 = DistributionKind::chi_squared(s.n() - 1);
    constants["chi2_lower"] = confdom::quantile(chi2, (1.0 - opt.gamma) / 2.0);
    constants["chi2_upper"] = confdom::quantile(chi2, (1.0 + opt.gamma) / 2.0);
  } else {
    EstimatorKind estimator = parse_estimator(opt.estimator);
    record["estimator"] = estimator_echo(estimator);
    band = std::get<VarianceBand>(confdom::interval_variance(s, opt.gamma, estimator));
    double scale = estimator.df_scale(s.n());
    double eta = confdom::eta_log_sigma(opt.gamma, s.n(), scale).eta;
    constants["eta"] = eta;
    constants["exp_neg_eta"] = std::exp(-eta);
    constants["exp_eta"] = std::exp(eta);
    constants["df_scale"] = scale;
  }
  constants["sumsq"] = confdom::sample_sumsq(s);

  record["domain"] = "variance_band";
  record["lo"] = band.lo;
  record["hi"] = band.hi;
  record["center"] = nullptr;
  record["slope"] = nullptr;
  record["constants"] = constants;
  emit(record, opt.json);
  return kExitOk;
}

int run_interval_mean_t(const IntervalOpts& opt) {
  check_cli_gamma(opt.gamma);
  Sample s = confdom::load_sample_file(opt.data);
  auto interval = std::get<ThetaInterval>(confdom::interval_mean_t(s, opt.gamma));
  double t =
      confdom::quantile(DistributionKind::student_t(s.n() - 1), (1.0 + opt.gamma) / 2.0);
  double spread = confdom::unbiased_sigma(s);

  Json record;
  record["command"] = "interval mean-t";
  record["data"] = opt.data;
  record["n"] = s.n();
  record["gamma"] = opt.gamma;
  record["domain"] = "theta_interval";
  record["lo"] = interval.lo;
  record["hi"] = interval.hi;
  record["center"] = 0.5 * (interval.lo + interval.hi);
  record["slope"] = nullptr;
  record["constants"] = Json{{"t", t},
                             {"unbiased_sigma", spread},
                             {"half_width", 0.5 * (interval.hi - interval.lo)}};
  emit(record, opt.json);
  return kExitOk;
}

int run_interval_mean_diff(const IntervalOpts& opt) {
  check_cli_gamma(opt.gamma);
  TwoSample ts{confdom::load_sample_file(opt.data), confdom::load_sample_file(opt.data2)};
  auto interval = std::get<ThetaInterval>(
      confdom::interval_mean_diff(ts, opt.gamma, opt.sigma1, opt.sigma2));
  double z = confdom::quantile(DistributionKind::std_normal(), (1.0 + opt.gamma) / 2.0);

  Json record;
  record["command"] = "interval mean-diff";
  record["data"] = opt.data;
  record["data2"] = opt.data2;
  record["n"] = ts.x.n();
  record["m"] = ts.y.n();
  record["gamma"] = opt.gamma;
  record["sigma1"] = opt.sigma1;
  record["sigma2"] = opt.sigma2;
  record["domain"] = "theta_interval";
  record["lo"] = interval.lo;
  record["hi"] = interval.hi;
  record["center"] = 0.5 * (interval.lo + interval.hi);
  record["slope"] = nullptr;
  record["constants"] =
      Json{{"z", z}, {"half_width", 0.5 * (interval.hi - interval.lo)}};
  emit(record, opt.json);
  return kExitOk;
}

struct CoverageOpts {
  std::string case_name;
  double mu = 0.0;
  double sigma = 1.0;
  double mu2 = 0.0;
  double sigma2 = 1.0;
  int n = 0;
  int m = 0;
  double gamma = 0.95;
  std::string estimator = "mle";
  std::int64_t trials = 100000;
  std::uint64_t seed = 0;
  bool json = false;
};

int run_coverage_cmd(const CoverageOpts& opt) {
  check_cli_gamma(opt.gamma);
  confdom::CoverageExperiment exp;
  if (opt.case_name == "mean-known-sigma") {
    exp.kind = confdom::CoverageCase::MeanKnownSigma;
  } else if (opt.case_name == "variance") {
    exp.kind = confdom::CoverageCase::Variance;
  } else if (opt.case_name == "variance-alpha-point") {
    exp.kind = confdom::CoverageCase::VarianceAlphaPoint;
  } else if (opt.case_name == "mean-t") {
    exp.kind = confdom::CoverageCase::MeanT;
  } else if (opt.case_name == "mean-diff") {
    exp.kind = confdom::CoverageCase::MeanDiff;
  } else {
    throw std::invalid_argument("--case must be one of mean-known-sigma, variance, "
                                "variance-alpha-point, mean-t, mean-diff");
  }
  exp.state = confdom::NormalState(opt.mu, opt.sigma);
  exp.n = opt.n;
  exp.gamma = opt.gamma;
  exp.estimator = parse_estimator(opt.estimator);
  exp.trials = opt.trials;
  exp.seed = opt.seed;
  bool two_sample = exp.kind == confdom::CoverageCase::MeanDiff;
  if (two_sample) {
    exp.state2 = confdom::NormalState(opt.mu2, opt.sigma2);
    exp.m = opt.m;
  }

  confdom::CoverageReport report = confdom::run_coverage(exp, env_thread_cap());
  double tolerance = 5.0 * report.std_err;
  bool within = std::fabs(report.fraction - report.gamma) <= tolerance;

  Json record;
  record["command"] = "coverage";
  record["case"] = opt.case_name;
  record["mu"] = opt.mu;
  record["sigma"] = opt.sigma;
  if (two_sample) {
    record["mu2"] = opt.mu2;
    record["sigma2"] = opt.sigma2;
  }
  record["n"] = opt.n;
  if (two_sample) record["m"] = opt.m;
  if (exp.kind == confdom::CoverageCase::Variance)
    record["estimator"] = estimator_echo(exp.estimator);
  record["gamma"] = opt.gamma;
  record["trials"] = report.trials;
  record["seed"] = opt.seed;
  record["hits"] = report.hits;
  record["fraction"] = report.fraction;
  record["std_err"] = report.std_err;
  record["degenerate"] = report.degenerate;
  record["tolerance"] = tolerance;
  record["within_tolerance"] = within;
  emit(record, opt.json);
  return within ? kExitOk : kExitCoverage;
}

struct MleOpts {
  std::string constraint = "full";
  std::string data;
  bool json = false;
};

int run_mle_cmd(const MleOpts& opt) {
  Sample s = confdom::load_sample_file(opt.data);
  confdom::ConstraintSet k = confdom::ConstraintSet::full();
  if (opt.constraint == "full") {
    k = confdom::ConstraintSet::full();
  } else if (opt.constraint.rfind("fixed-sigma:", 0) == 0) {
    k = confdom::ConstraintSet::fixed_sigma(std::stod(opt.constraint.substr(12)));
  } else if (opt.constraint.rfind("fixed-mu:", 0) == 0) {
    k = confdom::ConstraintSet::fixed_mu(std::stod(opt.constraint.substr(9)));
  } else {
    throw std::invalid_argument(
        "--constraint must be full, fixed-sigma:<sigma>, or fixed-mu:<mu>");
  }
  confdom::MleResult result = confdom::mle(s, k);

  Json record;
  record["command"] = "mle";
  record["data"] = opt.data;
  record["n"] = s.n();
  record["constraint"] = opt.constraint;
  record["mu"] = result.state.mu;
  record["sigma"] = result.state.sigma;
  record["log_likelihood"] = result.log_likelihood;
  emit(record, opt.json);
  return kExitOk;
}

struct ReproduceRow {
  const char* eq;
  const char* label;
  const char* key;
  double computed;
  double reference;  // NaN when the source prints no digit
  const char* note;
};

int run_reproduce(bool as_json) {
  int n = 3;
  double gamma = 0.95;
  double eta = confdom::eta_log_sigma(gamma, n, 3.0).eta;
  double etap = confdom::eta_log_sigma(gamma, n, 2.0).eta;
  auto chi2 = DistributionKind::chi_squared(n - 1);
  double chi2_lower = confdom::quantile(chi2, (1.0 - gamma) / 2.0);
  double chi2_upper = confdom::quantile(chi2, (1.0 + gamma) / 2.0);
  double c = confdom::alpha_point_reconciliation_c(gamma, n);
  const double no_ref = std::nan("");

  const ReproduceRow rows[] = {
      {"Eq. 41", "exp(-eta)", "eq41_exp_neg_eta", std::exp(-eta), 0.1849, ""},
      {"Eq. 41", "exp(+eta)", "eq41_exp_pos_eta", std::exp(eta), 5.4077, ""},
      {"Eq. 42", "exp(-2 eta)/3", "eq42_low_coeff", std::exp(-2.0 * eta) / 3.0, 0.0114,
       ""},
      {"Eq. 42", "exp(+2 eta)/3", "eq42_high_coeff", std::exp(2.0 * eta) / 3.0, 9.748,
       ""},
      {"Eq. 48", "exp(-eta')", "eq48_exp_neg_eta", std::exp(-etap), 0.2265, ""},
      {"Eq. 48", "exp(+eta')", "eq48_exp_pos_eta", std::exp(etap), 4.4154, ""},
      {"Eq. 49", "exp(-2 eta')/2", "eq49_low_coeff", std::exp(-2.0 * etap) / 2.0,
       0.00256, "(see note 1)"},
      {"Eq. 49", "exp(+2 eta')/2", "eq49_high_coeff", std::exp(2.0 * etap) / 2.0, 9.748,
       ""},
      {"Eq. 54", "chi2 lower quantile", "eq54_chi2_lower", chi2_lower, 0.0506, ""},
      {"Eq. 54", "chi2 upper quantile", "eq54_chi2_upper", chi2_upper, 7.378, ""},
      {"Eq. 55", "1/chi2 upper", "eq55_inv_upper", 1.0 / chi2_upper, 0.1355, ""},
      {"Eq. 55", "1/chi2 lower", "eq55_inv_lower", 1.0 / chi2_lower, 19.763,
       "(see note 2)"},
      {"Eq. 100", "reconciliation c", "eq100_c", c, no_ref, ""},
  };

  const char* note1 =
      "note 1: the reference prints 0.00256 for the Eq. 49 lower coefficient, but its "
      "own Eq. 48 constants give (0.2265)^2/2 = 0.02565; the computed value matches "
      "0.02565, so the printed digit drops a factor of 10.";
  const char* note2 =
      "note 2: the reference value 19.763 for Eq. 55 is 1/0.0506, the reciprocal of "
      "the rounded quantile; at full precision the coefficient is 19.7489.";

  if (as_json) {
    Json record;
    record["command"] = "reproduce";
    record["n"] = n;
    record["gamma"] = gamma;
    for (const auto& row : rows) {
      record[row.key] = row.computed;
      if (!std::isnan(row.reference)) {
        record[std::string(row.key) + "_ref"] = row.reference;
        record[std::string(row.key) + "_delta"] = std::fabs(row.computed - row.reference);
      }
    }
    record["note_1"] = note1;
    record["note_2"] = note2;
    std::cout << record.dump() << "\n";
    return kExitOk;
  }

  std::cout << "command: reproduce\nn: " << n << "\ngamma: " << fmt6(gamma) << "\n";
  std::cout << std::left << std::setw(9) << "row" << std::setw(22) << "quantity"
            << std::setw(14) << "computed" << std::setw(12) << "reference"
            << "|delta|\n";
  for (const auto& row : rows) {
    std::ostringstream line;
    line << std::left << std::setw(9) << row.eq << std::setw(22) << row.label
         << std::setw(14) << fmt6(row.computed);
    if (std::isnan(row.reference)) {
      line << std::setw(12) << "-" << "-";
    } else {
      std::ostringstream delta;
      delta << std::scientific << std::setprecision(2)
            << std::fabs(row.computed - row.reference);
      line << std::setw(12) << fmt6(row.reference) << delta.str();
    }
    if (row.note[0] != '\0') line << "  " << row.note;
    std::cout << line.str() << "\n";
  }
  std::cout << note1 << "\n" << note2 << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"confidence domains, estimators, and coverage checks for the normal "
               "measurement family"};
  app.require_subcommand(1);
  int exit_code = kExitOk;

  // interval
  auto* interval = app.add_subcommand("interval", "build a confidence domain from data");
  interval->require_subcommand(1);
  IntervalOpts iopt;

  auto add_common = [&](CLI::App* sub, bool needs_data2) {
    sub->add_option("--gamma", iopt.gamma, "confidence level in [0.5, 0.9999]")
        ->capture_default_str();
    sub->add_option("--data", iopt.data, "sample file, one float per line ('-' = stdin)")
        ->required();
    if (needs_data2)
      sub->add_option("--data2", iopt.data2, "second sample file")->required();
    sub->add_flag("--json", iopt.json, "emit a single JSON object");
  };

  auto* mks = interval->add_subcommand("mean-known-sigma",
                                       "cone for the location at a known spread");
  add_common(mks, false);
  mks->add_option("--sigma", iopt.sigma, "known spread, > 0")->required();
  mks->callback([&] { exit_code = run_interval_mean_known_sigma(iopt); });

  auto* var = interval->add_subcommand("variance", "band for the squared spread");
  add_common(var, false);
  var->add_option("--estimator", iopt.estimator, "mle | unbiased | scaled:<c>")
      ->capture_default_str();
  var->callback([&] { exit_code = run_interval_variance(iopt, false); });

  auto* alpha = interval->add_subcommand("variance-alpha-point",
                                         "equal-tails band for the squared spread");
  add_common(alpha, false);
  alpha->callback([&] { exit_code = run_interval_variance(iopt, true); });

  auto* meant = interval->add_subcommand("mean-t", "t interval for the location");
  add_common(meant, false);
  meant->callback([&] { exit_code = run_interval_mean_t(iopt); });

  auto* diff = interval->add_subcommand("mean-diff",
                                        "interval for the difference of two locations");
  add_common(diff, true);
  diff->add_option("--sigma1", iopt.sigma1, "known spread of the first sample")->required();
  diff->add_option("--sigma2", iopt.sigma2, "known spread of the second sample")
      ->required();
  diff->callback([&] { exit_code = run_interval_mean_diff(iopt); });

  // coverage
  CoverageOpts copt;
  auto* cov = app.add_subcommand("coverage", "Monte Carlo capture-frequency check");
  cov->add_option("--case", copt.case_name,
                  "mean-known-sigma | variance | variance-alpha-point | mean-t | mean-diff")
      ->required();
  cov->add_option("--mu", copt.mu, "true location")->capture_default_str();
  cov->add_option("--sigma", copt.sigma, "true spread")->capture_default_str();
  cov->add_option("--mu2", copt.mu2, "true location of the second sample")
      ->capture_default_str();
  cov->add_option("--sigma2", copt.sigma2, "true spread of the second sample")
      ->capture_default_str();
  cov->add_option("--n", copt.n, "sample size")->required();
  cov->add_option("--m", copt.m, "second sample size (mean-diff)");
  cov->add_option("--gamma", copt.gamma, "confidence level")->capture_default_str();
  cov->add_option("--estimator", copt.estimator, "spread statistic for --case variance")
      ->capture_default_str();
  cov->add_option("--trials", copt.trials, "number of simulated measurements")
      ->capture_default_str();
  cov->add_option("--seed", copt.seed, "RNG seed")->capture_default_str();
  cov->add_flag("--json", copt.json, "emit a single JSON object");
  cov->callback([&] { exit_code = run_coverage_cmd(copt); });

  // reproduce
  bool reproduce_json = false;
  auto* rep = app.add_subcommand("reproduce",
                                 "print the built-in reference table (n=3, gamma=0.95)");
  rep->add_flag("--json", reproduce_json, "emit a single JSON object");
  rep->callback([&] { exit_code = run_reproduce(reproduce_json); });

  // mle
  MleOpts mopt;
  auto* mle_cmd = app.add_subcommand("mle", "maximum-likelihood state from data");
  mle_cmd->add_option("--constraint", mopt.constraint,
                      "full | fixed-sigma:<sigma> | fixed-mu:<mu>")
      ->capture_default_str();
  mle_cmd->add_option("--data", mopt.data, "sample file ('-' = stdin)")->required();
  mle_cmd->add_flag("--json", mopt.json, "emit a single JSON object");
  mle_cmd->callback([&] { exit_code = run_mle_cmd(mopt); });

  try {
    app.parse(argc, argv);
    return exit_code;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const confdom::degenerate_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
