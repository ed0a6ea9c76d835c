#include "benthos/passage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace benthos {

namespace {

constexpr int kMaxRootIterations = 200;
constexpr double kRelWidth = 2e-15;  // ~9 ulps, reachable by bisection

double residual_tolerance(double s) { return 1e-12 * std::max(1.0, s); }

}  // namespace

double inverse_laplace_exponent(const LevyModel& model, double s) {
  if (!(s >= 0.0)) {
    throw std::invalid_argument("transform parameter s must be >= 0");
  }
  if (s == 0.0) return 0.0;

  const double v = effective_velocity(model);

  // psi is convex with psi(0) = 0 and psi'(0) = v, so psi(theta) >= v*theta
  // and the root lies in (0, s/v].
  double lo = 0.0;
  double f_lo = -s;
  double hi = s / v;
  if (!std::isfinite(hi)) {
    throw std::invalid_argument("transform parameter s too large for model");
  }
  double f_hi = laplace_exponent(model, hi) - s;
  // psi(s/v) >= s holds exactly, but the rounded evaluation can land a few
  // ulps short when the drift terms cancel; widen past the rounding before
  // declaring the bracket broken.
  for (double grow = 4e-16; f_hi < 0.0 && grow <= 1e-12; grow *= 4.0) {
    hi = (s / v) * (1.0 + grow);
    f_hi = laplace_exponent(model, hi) - s;
  }
  if (f_hi < 0.0) {
    throw std::runtime_error("inverse_laplace_exponent: bracket psi(s/v) >= s failed");
  }
  const double bracket_cap = hi;

  double best = hi;
  double f_best = f_hi;
  const double tol = residual_tolerance(s);

  for (int iter = 0; iter < kMaxRootIterations; ++iter) {
    if (f_best == 0.0) break;
    const double width = hi - lo;
    if (width <= kRelWidth * hi && std::abs(f_best) <= tol) break;
    if (!(width > 0.0) || std::nextafter(lo, hi) >= hi) break;  // ulp floor

    // Secant (false position) step, interleaved with bisection so the
    // bracket width halves at least every other iteration.
    double mid;
    const double denom = f_hi - f_lo;
    if (iter % 2 == 0 && denom > 0.0 && std::isfinite(denom)) {
      mid = (lo * f_hi - hi * f_lo) / denom;
      if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    } else {
      mid = 0.5 * (lo + hi);
    }

    const double f_mid = laplace_exponent(model, mid) - s;
    if (std::abs(f_mid) < std::abs(f_best)) {
      best = mid;
      f_best = f_mid;
    }
    if (f_mid < 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }

  if (!(std::abs(f_best) <= tol)) {
    throw std::runtime_error(
        "inverse_laplace_exponent: root search did not converge");
  }
  if (!(best > 0.0 && best <= bracket_cap)) {
    throw std::runtime_error(
        "inverse_laplace_exponent: root left the bracket (0, s/v]");
  }
  return best;
}

double log_passage_time_transform(const LevyModel& model, double boundary,
                                  double s) {
  if (!(boundary >= 0.0)) {
    throw std::invalid_argument("boundary L must be >= 0");
  }
  if (!(s >= 0.0)) {
    throw std::invalid_argument("transform parameter s must be >= 0");
  }
  if (boundary == 0.0 || s == 0.0) return 0.0;
  return -boundary * inverse_laplace_exponent(model, s);
}

double passage_time_transform(const LevyModel& model, double boundary,
                              double s) {
  const double log_value = log_passage_time_transform(model, boundary, s);
  if (log_value == 0.0) return 1.0;
  if (log_value < -745.0) return 0.0;  // exp underflows past here
  return std::exp(log_value);
}

double passage_time_transform(const PassageQuery& query) {
  return passage_time_transform(query.model, query.boundary,
                                query.transform_param);
}

double washout_probability(const LevyModel& model, double lambda1,
                           double boundary) {
  if (!(lambda1 > 0.0)) {
    throw std::invalid_argument("settling rate lambda1 must be > 0");
  }
  return passage_time_transform(model, boundary, lambda1);
}

double mean_passage_time(const LevyModel& model, double boundary) {
  if (!(boundary >= 0.0)) {
    throw std::invalid_argument("boundary L must be >= 0");
  }
  return boundary / effective_velocity(model);
}

}  // namespace benthos
