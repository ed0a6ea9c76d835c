#pragma once

#include <span>
#include <string>
#include <vector>

#include "benthos/levy.hpp"

namespace benthos {

// Rates of the two-regime population model: benthic individuals reproduce at
// growth_rate and leave for the drift at departure_rate; mobile individuals
// settle back at settling_rate. All strictly positive.
struct RegimeParams {
  double growth_rate = 0.0;     // r, 1/time
  double departure_rate = 0.0;  // lambda0, 1/time
  double settling_rate = 0.0;   // lambda1, 1/time
};

std::vector<std::string> validate(const RegimeParams& params);
void require_valid(const RegimeParams& params);

// Outcome of the critical-length equation r = lambda0 * pi(lambda1, L).
// When departures are rarer than births (lambda0 < r) growth wins at every
// length. Otherwise the unique solution L_c separates wash-out from
// persistence. The lambda0 == r boundary comes back as L_c = 0 with the
// degenerate flag set.
struct PersistenceVerdict {
  bool always_persists = false;
  double critical_length = 0.0;
  bool degenerate = false;
};

PersistenceVerdict persistence_verdict(const LevyModel& model,
                                       const RegimeParams& params);

// Relative residual |lambda0 * pi(lambda1, L) / r - 1| of the critical
// equation at a candidate length.
double critical_length_round_trip_residual(const LevyModel& model,
                                           const RegimeParams& params,
                                           double length);

// Closed form for Brownian motion with drift v and dispersion D,
//   L_c = ln(lambda0/r) / (2 lambda1) * (sqrt(1 + 2 D lambda1 / v^2) + 1) * v.
// At D = 0 this reduces exactly to the asymptotic formula below.
double critical_length_brownian_closed_form(double v, double D,
                                            const RegimeParams& params);

// Large-velocity asymptote L_c ~ v * ln(lambda0/r) / lambda1, exact at D = 0.
double asymptotic_critical_length(double v, const RegimeParams& params);

struct CurveRow {
  double v = 0.0;               // effective velocity at this grid point
  double critical_length = 0.0;
  double asymptotic_length = 0.0;
  double ratio = 0.0;           // critical_length / asymptotic_length
  std::string error;            // non-empty when this point failed
};

// Critical length across a grid of linear drifts, holding the jump and
// diffusion structure of `base` fixed. Rows appear in grid order; a failing
// point records its error and never aborts the rest of the curve.
std::vector<CurveRow> critical_curve(const LevyModel& base,
                                     const RegimeParams& params,
                                     std::span<const double> drift_grid);

}  // namespace benthos
