#pragma once

#include "benthos/levy.hpp"

namespace benthos {

struct PassageQuery {
  LevyModel model;
  double boundary = 0.0;         // L >= 0
  double transform_param = 0.0;  // s >= 0
};

// Unique positive root Phi(s) of psi(theta) = s, the inverse of the Laplace
// exponent. Convexity pins the root in (0, s/v], which brackets the search.
// Phi(0) = 0 by continuity; s < 0 is rejected. A failure of the bracketed
// search to converge signals a numerical defect and throws std::runtime_error.
double inverse_laplace_exponent(const LevyModel& model, double s);

// log E[exp(-s T_L)] = -L * Phi(s), for the first passage time T_L to the
// boundary at L. Kept in log space so large L stays representable.
double log_passage_time_transform(const LevyModel& model, double boundary,
                                  double s);

// E[exp(-s T_L)] = exp(-L * Phi(s)); equals 1 when L = 0 or s = 0, strictly
// decreasing in both arguments. Underflow clamps to 0.
double passage_time_transform(const LevyModel& model, double boundary,
                              double s);
double passage_time_transform(const PassageQuery& query);

// Wash-out probability: the chance a mobile individual reaches the boundary
// before its settling clock with rate lambda1 rings,
//   pi(lambda1, L) = P(T_L < S_1) = E exp(-lambda1 T_L).
double washout_probability(const LevyModel& model, double lambda1,
                           double boundary);

// E T_L = L / v with v the effective velocity.
double mean_passage_time(const LevyModel& model, double boundary);

}  // namespace benthos
