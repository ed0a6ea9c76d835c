#pragma once

#include <string>
#include <vector>

#include "benthos/simulate.hpp"

namespace benthos {

// How a validation check decides pass/fail.
enum class CheckRule {
  four_se,      // |estimate - analytic| <= 4 * std_error
  upper_bound,  // estimate < analytic
  lower_bound,  // estimate > analytic
};

struct ValidationCheck {
  std::string name;
  CheckRule rule = CheckRule::four_se;
  double analytic = 0.0;  // target value, or the bound for bound rules
  double estimate = 0.0;
  double std_error = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
};

// Monte Carlo cross-validation of the analytic layer: wash-out transforms and
// mean passage times on the canonical model set, extinction threshold
// behavior around the critical length with the Galton-Watson offspring-mean
// identity, the Kesten survival contrast for branching motion with
// absorption, and the clone/martingale checks for e^{rt} E f(Y_t).
//
// cfg.n_paths drives the per-check sample size for transform and clone
// estimates; population and branching checks use 200 replicates. Every check
// derives its streams from cfg.seed, so the report is deterministic.
ValidationReport run_validation_suite(const SimConfig& cfg);

}  // namespace benthos
