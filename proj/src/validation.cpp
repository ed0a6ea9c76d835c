#include "benthos/validation.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "benthos/passage.hpp"
#include "benthos/persistence.hpp"
#include "benthos/rng.hpp"

namespace benthos {

bool ValidationReport::all_passed() const {
  for (const auto& check : checks) {
    if (!check.passed) return false;
  }
  return true;
}

namespace {

ValidationCheck make_check(std::string name, CheckRule rule, double analytic,
                           double estimate, double std_error) {
  ValidationCheck check;
  check.name = std::move(name);
  check.rule = rule;
  check.analytic = analytic;
  check.estimate = estimate;
  check.std_error = std_error;
  switch (rule) {
    case CheckRule::four_se:
      check.passed = std::abs(estimate - analytic) <= 4.0 * std_error;
      break;
    case CheckRule::upper_bound:
      check.passed = estimate < analytic;
      break;
    case CheckRule::lower_bound:
      check.passed = estimate > analytic;
      break;
  }
  return check;
}

struct NamedModel {
  std::string name;
  LevyModel model;
};

// The canonical cross-check set: three Brownian parameterizations, both jump
// families, and the noise-free drift model.
std::vector<NamedModel> canonical_models() {
  return {
      {"brownian v=1 D=1", LevyModel::brownian(1.0, 1.0)},
      {"brownian v=2 D=0.5", LevyModel::brownian(2.0, 0.5)},
      {"brownian v=0.5 D=2", LevyModel::brownian(0.5, 2.0)},
      {"exponential jumps", LevyModel::with_exponential_jumps(2.0, 0.5, 1.0, 0.5)},
      {"fixed jumps", LevyModel::with_fixed_jumps(2.0, 0.5, 0.5, 1.0)},
      {"deterministic v=2", LevyModel::deterministic(2.0)},
  };
}

SimConfig stream_config(const SimConfig& cfg, std::uint64_t salt) {
  SimConfig out = cfg;
  out.seed = mix64(cfg.seed + salt);
  return out;
}

void add_transform_checks(ValidationReport& report, const SimConfig& cfg) {
  const double lambda1 = 1.0;
  const double boundary = 1.0;
  std::uint64_t salt = 1;
  for (const auto& [name, model] : canonical_models()) {
    SimConfig local = stream_config(cfg, salt++);
    local.dt = std::min(local.dt, 0.005);  // keep the stepping bias small
    const double analytic = washout_probability(model, lambda1, boundary);
    const EstimateWithError est =
        estimate_washout(model, lambda1, boundary, local);
    report.checks.push_back(make_check("washout " + name, CheckRule::four_se,
                                       analytic, est.mean, est.std_error));
  }
  for (const auto& [name, model] : canonical_models()) {
    SimConfig local = stream_config(cfg, salt++);
    local.dt = std::min(local.dt, 0.005);
    const double analytic = mean_passage_time(model, boundary);
    const EstimateWithError est =
        estimate_mean_passage_time(model, boundary, local);
    report.checks.push_back(make_check("mean passage " + name,
                                       CheckRule::four_se, analytic, est.mean,
                                       est.std_error));
  }
}

void add_threshold_checks(ValidationReport& report, const SimConfig& cfg) {
  const RegimeParams params{1.0, 2.0, 1.0};
  const LevyModel model = LevyModel::brownian(1.0, 1.0);
  const PersistenceVerdict verdict = persistence_verdict(model, params);
  const double lc = verdict.critical_length;
  const std::int64_t replicates = 200;
  const std::int64_t initial = 20;

  SimConfig pop_cfg = stream_config(cfg, 100);
  pop_cfg.horizon = 50.0;
  pop_cfg.population_cap = 20000;

  const EstimateWithError low = estimate_extinction_probability(
      model, params, lc / 4.0, initial, replicates, pop_cfg);
  report.checks.push_back(make_check("extinction below threshold (L_c/4)",
                                     CheckRule::lower_bound, 0.9, low.mean,
                                     low.std_error));

  SimConfig pop_cfg_high = stream_config(cfg, 101);
  pop_cfg_high.horizon = 50.0;
  pop_cfg_high.population_cap = 20000;
  const EstimateWithError high = estimate_extinction_probability(
      model, params, 4.0 * lc, initial, replicates, pop_cfg_high);
  report.checks.push_back(make_check("extinction above threshold (4 L_c)",
                                     CheckRule::upper_bound, 0.2, high.mean,
                                     high.std_error));

  // Offspring-mean identity, measured below the threshold where every
  // lifetime completes: E offspring = (r / lambda0) / pi(lambda1, L).
  SimConfig lineage_cfg = stream_config(cfg, 102);
  lineage_cfg.horizon = 50.0;
  lineage_cfg.population_cap = 20000;
  const double boundary = lc / 4.0;
  const double pi = washout_probability(model, params.settling_rate, boundary);
  const double analytic = params.growth_rate / params.departure_rate / pi;
  const LineageStats stats = population_lineage_stats(
      model, params, boundary, initial, replicates, lineage_cfg);
  report.checks.push_back(make_check("offspring mean (L_c/4)",
                                     CheckRule::four_se, analytic,
                                     stats.offspring.mean,
                                     stats.offspring.std_error));
  report.checks.push_back(make_check(
      "benthic phases mean (L_c/4)", CheckRule::four_se, 1.0 / pi,
      stats.benthic_phases.mean, stats.benthic_phases.std_error));
}

void add_kesten_checks(ValidationReport& report, const SimConfig& cfg) {
  const double D = 1.0;
  const double r = 0.5;
  const double critical_speed = std::sqrt(2.0 * D * r);
  const std::int64_t replicates = 200;

  SimConfig bbm_cfg = stream_config(cfg, 200);
  bbm_cfg.horizon = 30.0;
  bbm_cfg.population_cap = 20000;
  const BbmReport sub = simulate_bbm_kesten(D, r, -1.5 * critical_speed, 1.0,
                                            replicates, bbm_cfg);
  report.checks.push_back(make_check(
      "kesten survival |v| = 1.5 sqrt(2Dr)", CheckRule::upper_bound, 0.05,
      sub.survival_fraction.mean, sub.survival_fraction.std_error));

  SimConfig bbm_cfg_super = stream_config(cfg, 201);
  bbm_cfg_super.horizon = 30.0;
  bbm_cfg_super.population_cap = 20000;
  const BbmReport super_ = simulate_bbm_kesten(D, r, -0.5 * critical_speed, 2.0,
                                               replicates, bbm_cfg_super);
  report.checks.push_back(make_check(
      "kesten survival |v| = 0.5 sqrt(2Dr)", CheckRule::lower_bound, 0.2,
      super_.survival_fraction.mean, super_.survival_fraction.std_error));
}

void add_yule_check(ValidationReport& report, const SimConfig& cfg) {
  const double r = 0.7;
  const double t = 1.0;
  const SimConfig local = stream_config(cfg, 400);
  std::vector<double> draws(static_cast<std::size_t>(local.n_paths), 0.0);
  for (std::int64_t i = 0; i < local.n_paths; ++i) {
    auto rng = make_stream(local.seed, static_cast<std::uint64_t>(i));
    draws[static_cast<std::size_t>(i)] =
        static_cast<double>(sample_yule(r, t, rng));
  }
  double sum = 0.0;
  for (const double x : draws) sum += x;
  const double mean = sum / static_cast<double>(draws.size());
  double ss = 0.0;
  for (const double x : draws) ss += (x - mean) * (x - mean);
  const double se = std::sqrt(ss / (static_cast<double>(draws.size()) *
                                    (static_cast<double>(draws.size()) - 1.0)));
  report.checks.push_back(make_check("yule mean r=0.7 t=1",
                                     CheckRule::four_se, std::exp(r * t), mean,
                                     se));
}

std::string brief_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

const char* clone_function_name(CloneTestFunction f) {
  switch (f) {
    case CloneTestFunction::linear:
      return "f(x)=x";
    case CloneTestFunction::square:
      return "f(x)=x^2";
    case CloneTestFunction::gaussian:
      return "f(x)=exp(-x^2)";
  }
  return "?";
}

void add_clone_checks(ValidationReport& report, const SimConfig& cfg) {
  const double D = 1.0;
  const double v = -0.5;
  const double r = 0.7;
  const double x0 = 0.3;
  const CloneTestFunction functions[] = {CloneTestFunction::linear,
                                         CloneTestFunction::square,
                                         CloneTestFunction::gaussian};
  const double times[] = {0.5, 1.0, 2.0};
  std::uint64_t salt = 300;
  for (const CloneTestFunction f : functions) {
    for (const double t : times) {
      SimConfig local = stream_config(cfg, salt++);
      local.dt = std::min(local.dt, 0.005);  // quadrature bias control
      const CloneCheckReport check = clone_model_check(D, v, r, f, x0, t, local);
      const std::string tag =
          std::string(clone_function_name(f)) + " t=" + brief_number(t);
      report.checks.push_back(make_check("clone mean " + tag,
                                         CheckRule::four_se, check.analytic,
                                         check.mc_mean, check.mc_std_error));
      report.checks.push_back(make_check(
          "martingale gap " + tag, CheckRule::four_se, 0.0,
          check.martingale_gap, check.martingale_gap_std_error));
    }
  }
}

}  // namespace

ValidationReport run_validation_suite(const SimConfig& cfg) {
  require_valid(cfg);
  ValidationReport report;
  add_transform_checks(report, cfg);
  add_yule_check(report, cfg);
  add_threshold_checks(report, cfg);
  add_kesten_checks(report, cfg);
  add_clone_checks(report, cfg);
  return report;
}

}  // namespace benthos
