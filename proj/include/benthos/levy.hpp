#pragma once

#include <string>
#include <variant>
#include <vector>

namespace benthos {

// Downward-jump component of the mobile-phase motion. Rates are events per
// unit time, sizes are magnitudes of leftward jumps (strictly positive).
// All families have finite activity, so the exponent below stays closed form
// and paths can be simulated without compensation terms.
struct NoJumps {};

struct ExponentialJumps {
  double rate = 0.0;       // events/time
  double mean_size = 0.0;  // mean jump magnitude (1/alpha)
};

struct FixedJumps {
  double rate = 0.0;  // events/time
  double size = 0.0;  // jump magnitude
};

struct JumpAtom {
  double size = 0.0;
  double rate = 0.0;
};

struct DiscreteJumps {
  std::vector<JumpAtom> atoms;
};

using JumpSpec = std::variant<NoJumps, ExponentialJumps, FixedJumps, DiscreteJumps>;

// Spectrally negative Levy motion of a drifting individual,
//
//   Y_t = linear_drift * t + sqrt(diffusion) * B_t - (downward jumps),
//
// with Laplace exponent (log E exp(theta * Y_1))
//
//   psi(theta) = linear_drift * theta + diffusion * theta^2 / 2
//              + sum_i rate_i * (E[exp(-theta * X_i)] - 1),
//
// convex on [0, inf) with psi(0) = 0 and psi'(0+) equal to the effective
// velocity. A model is usable only when that velocity is positive.
struct LevyModel {
  double linear_drift = 0.0;  // length/time, deterministic drift to the right
  double diffusion = 0.0;     // length^2/time
  JumpSpec jumps = NoJumps{};

  static LevyModel brownian(double v, double D) { return {v, D, NoJumps{}}; }

  static LevyModel deterministic(double v) { return {v, 0.0, NoJumps{}}; }

  static LevyModel with_exponential_jumps(double drift, double D, double rate,
                                          double mean_size) {
    return {drift, D, ExponentialJumps{rate, mean_size}};
  }

  static LevyModel with_fixed_jumps(double drift, double D, double rate,
                                    double size) {
    return {drift, D, FixedJumps{rate, size}};
  }

  static LevyModel with_discrete_jumps(double drift, double D,
                                       std::vector<JumpAtom> atoms) {
    return {drift, D, DiscreteJumps{std::move(atoms)}};
  }
};

// Mean displacement rate drained by jumps, sum_i rate_i * E[X_i].
double jump_drift(const JumpSpec& jumps);

// Total jump intensity, sum_i rate_i.
double total_jump_rate(const JumpSpec& jumps);

// Effective velocity v = linear_drift - jump_drift. Equals psi'(0+).
// Throws std::domain_error when v <= 0: the model only makes sense for
// net motion toward the boundary, 0 < v < inf.
double effective_velocity(const LevyModel& model);

// Laplace exponent psi(theta). Defined for every theta >= 0; negative theta
// is accepted as long as each jump family keeps E exp(-theta X) finite
// (exponential jumps need theta > -1/mean_size), which derivative checks use.
double laplace_exponent(const LevyModel& model, double theta);

// Empty result iff the model invariants hold. Each entry names the violated
// invariant; validation itself never throws.
std::vector<std::string> validate(const LevyModel& model);

// Throws std::invalid_argument listing all violations when validate() is
// non-empty.
void require_valid(const LevyModel& model);

}  // namespace benthos
