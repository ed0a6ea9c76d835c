#include "benthos/levy.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace benthos {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Velocity without the positivity gate; validation reports the sign itself.
double raw_velocity(const LevyModel& model) {
  return model.linear_drift - jump_drift(model.jumps);
}

}  // namespace

double jump_drift(const JumpSpec& jumps) {
  return std::visit(
      overloaded{
          [](const NoJumps&) { return 0.0; },
          [](const ExponentialJumps& j) { return j.rate * j.mean_size; },
          [](const FixedJumps& j) { return j.rate * j.size; },
          [](const DiscreteJumps& j) {
            double total = 0.0;
            for (const auto& atom : j.atoms) total += atom.rate * atom.size;
            return total;
          },
      },
      jumps);
}

double total_jump_rate(const JumpSpec& jumps) {
  return std::visit(
      overloaded{
          [](const NoJumps&) { return 0.0; },
          [](const ExponentialJumps& j) { return j.rate; },
          [](const FixedJumps& j) { return j.rate; },
          [](const DiscreteJumps& j) {
            double total = 0.0;
            for (const auto& atom : j.atoms) total += atom.rate;
            return total;
          },
      },
      jumps);
}

double effective_velocity(const LevyModel& model) {
  const double v = raw_velocity(model);
  if (!(v > 0.0)) {
    throw std::domain_error("effective velocity must be positive");
  }
  return v;
}

double laplace_exponent(const LevyModel& model, double theta) {
  if (std::isnan(theta)) {
    throw std::domain_error("theta must not be NaN");
  }
  double psi = model.linear_drift * theta + 0.5 * model.diffusion * theta * theta;
  psi += std::visit(
      overloaded{
          [](const NoJumps&) { return 0.0; },
          [theta](const ExponentialJumps& j) {
            // E exp(-theta X) - 1 = -theta*mean / (1 + theta*mean), finite
            // for theta > -1/mean. The quotient form stays exact for tiny
            // theta where 1/(1+x) - 1 would cancel.
            const double scaled = theta * j.mean_size;
            const double denom = 1.0 + scaled;
            if (!(denom > 0.0)) {
              throw std::domain_error(
                  "theta out of domain for exponential jumps");
            }
            return j.rate * (-scaled / denom);
          },
          [theta](const FixedJumps& j) {
            return j.rate * std::expm1(-theta * j.size);
          },
          [theta](const DiscreteJumps& j) {
            double total = 0.0;
            for (const auto& atom : j.atoms) {
              total += atom.rate * std::expm1(-theta * atom.size);
            }
            return total;
          },
      },
      model.jumps);
  return psi;
}

std::vector<std::string> validate(const LevyModel& model) {
  std::vector<std::string> violations;
  if (!std::isfinite(model.linear_drift)) {
    violations.push_back("drift must be finite");
  }
  if (!(model.diffusion >= 0.0) || !std::isfinite(model.diffusion)) {
    violations.push_back("diffusion must be >= 0");
  }

  bool jumps_ok = true;
  bool rate_flagged = false;
  bool size_flagged = false;
  auto check_atom = [&](double rate, double size) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
      if (!rate_flagged) violations.push_back("jump rates must be >= 0 and finite");
      rate_flagged = true;
      jumps_ok = false;
    }
    if (!(size > 0.0) || !std::isfinite(size)) {
      if (!size_flagged) violations.push_back("jump sizes must be > 0 and finite");
      size_flagged = true;
      jumps_ok = false;
    }
  };
  std::visit(overloaded{
                 [](const NoJumps&) {},
                 [&](const ExponentialJumps& j) { check_atom(j.rate, j.mean_size); },
                 [&](const FixedJumps& j) { check_atom(j.rate, j.size); },
                 [&](const DiscreteJumps& j) {
                   for (const auto& atom : j.atoms) check_atom(atom.rate, atom.size);
                 },
             },
             model.jumps);

  if (jumps_ok && std::isfinite(model.linear_drift) &&
      !(raw_velocity(model) > 0.0)) {
    violations.push_back("effective velocity must be positive");
  }
  return violations;
}

void require_valid(const LevyModel& model) {
  const auto violations = validate(model);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid model: ";
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) msg << "; ";
    msg << violations[i];
  }
  throw std::invalid_argument(msg.str());
}

}  // namespace benthos
