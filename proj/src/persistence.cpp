#include "benthos/persistence.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "benthos/passage.hpp"

namespace benthos {

std::vector<std::string> validate(const RegimeParams& params) {
  std::vector<std::string> violations;
  if (!(params.growth_rate > 0.0) || !std::isfinite(params.growth_rate)) {
    violations.push_back("growthRate > 0");
  }
  if (!(params.departure_rate > 0.0) || !std::isfinite(params.departure_rate)) {
    violations.push_back("departureRate > 0");
  }
  if (!(params.settling_rate > 0.0) || !std::isfinite(params.settling_rate)) {
    violations.push_back("settlingRate > 0");
  }
  return violations;
}

void require_valid(const RegimeParams& params) {
  const auto violations = validate(params);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid regime parameters: ";
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) msg << "; ";
    msg << violations[i] << " violated";
  }
  throw std::invalid_argument(msg.str());
}

PersistenceVerdict persistence_verdict(const LevyModel& model,
                                       const RegimeParams& params) {
  require_valid(params);
  require_valid(model);

  if (params.departure_rate < params.growth_rate) {
    return {true, 0.0, false};
  }
  if (params.departure_rate == params.growth_rate) {
    // ln(lambda0/r) = 0: the critical equation degenerates to L_c = 0.
    return {false, 0.0, true};
  }
  if (model.diffusion == 0.0 && total_jump_rate(model.jumps) == 0.0) {
    // pure drift: Phi(s) = s/v, so the large-drift asymptote is the exact
    // answer; evaluate it directly rather than through the root search
    const double length =
        asymptotic_critical_length(effective_velocity(model), params);
    return {false, length, false};
  }
  const double phi = inverse_laplace_exponent(model, params.settling_rate);
  const double length =
      std::log(params.departure_rate / params.growth_rate) / phi;
  return {false, length, false};
}

double critical_length_round_trip_residual(const LevyModel& model,
                                           const RegimeParams& params,
                                           double length) {
  const double pi =
      washout_probability(model, params.settling_rate, length);
  return std::abs(params.departure_rate * pi / params.growth_rate - 1.0);
}

double asymptotic_critical_length(double v, const RegimeParams& params) {
  require_valid(params);
  if (!(v > 0.0)) {
    throw std::invalid_argument("effective velocity must be positive");
  }
  if (params.departure_rate < params.growth_rate) {
    throw std::invalid_argument(
        "critical length requires departureRate >= growthRate");
  }
  return (std::log(params.departure_rate / params.growth_rate) /
          params.settling_rate) *
         v;
}

double critical_length_brownian_closed_form(double v, double D,
                                            const RegimeParams& params) {
  if (!(D >= 0.0)) {
    throw std::invalid_argument("diffusion must be >= 0");
  }
  // D = 0 collapses to the asymptote exactly; branch keeps it bit-identical.
  if (D == 0.0) return asymptotic_critical_length(v, params);

  require_valid(params);
  if (!(v > 0.0)) {
    throw std::invalid_argument("effective velocity must be positive");
  }
  if (params.departure_rate < params.growth_rate) {
    throw std::invalid_argument(
        "critical length requires departureRate >= growthRate");
  }
  const double lambda1 = params.settling_rate;
  const double log_ratio =
      std::log(params.departure_rate / params.growth_rate);
  return log_ratio / (2.0 * lambda1) *
         (std::sqrt(1.0 + 2.0 * D * lambda1 / (v * v)) + 1.0) * v;
}

std::vector<CurveRow> critical_curve(const LevyModel& base,
                                     const RegimeParams& params,
                                     std::span<const double> drift_grid) {
  require_valid(params);
  if (!(params.departure_rate > params.growth_rate)) {
    throw std::invalid_argument(
        "critical curve requires departureRate > growthRate");
  }

  std::vector<CurveRow> rows;
  rows.reserve(drift_grid.size());
  for (const double drift : drift_grid) {
    LevyModel model = base;
    model.linear_drift = drift;
    CurveRow row;
    row.v = model.linear_drift - jump_drift(model.jumps);
    try {
      require_valid(model);
      const auto verdict = persistence_verdict(model, params);
      row.critical_length = verdict.critical_length;
      row.asymptotic_length = asymptotic_critical_length(row.v, params);
      row.ratio = row.critical_length / row.asymptotic_length;
    } catch (const std::exception& e) {
      row.critical_length = std::numeric_limits<double>::quiet_NaN();
      row.asymptotic_length = std::numeric_limits<double>::quiet_NaN();
      row.ratio = std::numeric_limits<double>::quiet_NaN();
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace benthos
