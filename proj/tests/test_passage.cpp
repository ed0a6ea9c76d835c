#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "benthos/levy.hpp"
#include "benthos/passage.hpp"

using namespace benthos;

namespace {

// Numerically stable Brownian inverse, 2s / (v + sqrt(v^2 + 2 D s)).
double brownian_phi(double v, double D, double s) {
  return 2.0 * s / (v + std::sqrt(v * v + 2.0 * D * s));
}

std::vector<LevyModel> canonical_models() {
  return {
      LevyModel::brownian(1.0, 1.0),
      LevyModel::brownian(2.0, 0.5),
      LevyModel::brownian(0.5, 2.0),
      LevyModel::with_exponential_jumps(2.0, 0.5, 1.0, 0.5),
      LevyModel::with_fixed_jumps(2.0, 0.5, 0.5, 1.0),
      LevyModel::deterministic(2.0),
  };
}

}  // namespace

TEST_CASE("brownian root matches the quadratic closed form") {
  for (const double v : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    for (const double s : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      const LevyModel model = LevyModel::brownian(v, 1.0);
      const double got = inverse_laplace_exponent(model, s);
      const double want = brownian_phi(v, 1.0, s);
      CHECK(std::abs(got - want) <= 1e-12 * want);
    }
  }
}

TEST_CASE("exponential-jump root hits the golden-ratio oracle") {
  // drift 2, rate 1, mean 1/2: psi(theta) = 2 theta - theta/(2 + theta), and
  // psi(theta) = 1 reduces to theta^2 + theta - 1 = 0.
  const LevyModel model = LevyModel::with_exponential_jumps(2.0, 0.0, 1.0, 0.5);
  const double want = (std::sqrt(5.0) - 1.0) / 2.0;
  const double got = inverse_laplace_exponent(model, 1.0);
  CHECK(std::abs(got - want) <= 1e-12 * want);
}

TEST_CASE("root search round-trips psi over a wide s range") {
  for (const LevyModel& model : canonical_models()) {
    for (int i = 0; i < 50; ++i) {
      const double s = std::pow(10.0, -3.0 + 6.0 * i / 49.0);
      const double phi = inverse_laplace_exponent(model, s);
      CHECK(phi > 0.0);
      CHECK(phi <= s / effective_velocity(model) * (1.0 + 1e-14));
      CHECK(std::abs(laplace_exponent(model, phi) - s) <=
            1e-12 * std::max(1.0, s));
    }
  }
}

TEST_CASE("phi is increasing in s and zero at zero") {
  for (const LevyModel& model : canonical_models()) {
    CHECK(inverse_laplace_exponent(model, 0.0) == 0.0);
    double prev = 0.0;
    for (int i = 1; i <= 40; ++i) {
      const double s = 0.25 * i;
      const double phi = inverse_laplace_exponent(model, s);
      CHECK(phi > prev);
      prev = phi;
    }
  }
  CHECK_THROWS_AS(
      inverse_laplace_exponent(LevyModel::brownian(1.0, 1.0), -1.0),
      std::invalid_argument);
}

TEST_CASE("transform identities and monotonicity") {
  const LevyModel model = LevyModel::brownian(1.0, 1.0);
  CHECK(passage_time_transform(model, 0.0, 2.0) == 1.0);
  CHECK(passage_time_transform(model, 2.0, 0.0) == 1.0);

  // matches exp(-L Phi(s)) and the textbook Brownian closed form
  const double s = 1.0;
  const double L = 2.0;
  const double phi = inverse_laplace_exponent(model, s);
  CHECK(passage_time_transform(model, L, s) ==
        doctest::Approx(std::exp(-L * phi)).epsilon(1e-15));
  const double display =
      std::exp(L * (1.0 - std::sqrt(1.0 + 2.0 * 1.0 * s)) / 1.0);
  CHECK(passage_time_transform(model, L, s) ==
        doctest::Approx(display).epsilon(1e-13));
  CHECK(log_passage_time_transform(model, L, s) ==
        doctest::Approx(-L * phi).epsilon(1e-15));

  double prev = 1.0;
  for (int i = 1; i <= 20; ++i) {
    const double value = passage_time_transform(model, 0.5 * i, s);
    CHECK(value < prev);
    prev = value;
  }
  prev = 1.0;
  for (int i = 1; i <= 20; ++i) {
    const double value = passage_time_transform(model, L, 0.5 * i);
    CHECK(value < prev);
    prev = value;
  }
}

TEST_CASE("transform underflows cleanly to zero") {
  const LevyModel model = LevyModel::brownian(1.0, 1.0);
  CHECK(passage_time_transform(model, 1e6, 1.0) == 0.0);
  CHECK(std::isfinite(log_passage_time_transform(model, 1e6, 1.0)));
}

TEST_CASE("small-s derivative of the transform recovers E T_L") {
  for (const LevyModel& model : canonical_models()) {
    const double L = 1.5;
    const double s = 1e-9;
    const double derivative =
        (1.0 - passage_time_transform(model, L, s)) / s;
    const double want = mean_passage_time(model, L);
    CHECK(derivative == doctest::Approx(want).epsilon(1e-4));
  }
}

TEST_CASE("mean passage time is L over the effective velocity") {
  CHECK(mean_passage_time(LevyModel::brownian(2.0, 1.0), 3.0) == 1.5);
  CHECK(mean_passage_time(
            LevyModel::with_exponential_jumps(2.0, 0.5, 1.0, 0.5), 3.0) ==
        doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("washout probability is the transform at lambda1") {
  const LevyModel model = LevyModel::with_fixed_jumps(2.0, 0.5, 0.5, 1.0);
  CHECK(washout_probability(model, 0.7, 1.3) ==
        passage_time_transform(model, 1.3, 0.7));
  CHECK_THROWS_AS(washout_probability(model, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(washout_probability(model, -1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("query overload agrees with the flat signature") {
  PassageQuery query;
  query.model = LevyModel::brownian(1.0, 1.0);
  query.boundary = 2.0;
  query.transform_param = 0.5;
  CHECK(passage_time_transform(query) ==
        passage_time_transform(query.model, 2.0, 0.5));
}
