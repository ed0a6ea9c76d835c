#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "benthos/levy.hpp"
#include "benthos/persistence.hpp"

namespace benthos {

// Knobs shared by every Monte Carlo engine. dt and horizon only matter for
// the time-stepping samplers (jump models and martingale paths); the
// Brownian and deterministic samplers are exact.
struct SimConfig {
  std::uint64_t seed = 12345;
  std::int64_t n_paths = 100000;
  double dt = 0.01;
  double horizon = 1e4;
  std::int64_t population_cap = 100000;
  int threads = 1;
};

void require_valid(const SimConfig& cfg);

struct EstimateWithError {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
  std::int64_t censored = 0;  // horizon-censored draws folded into the count
};

struct PassageSample {
  double time = 0.0;
  bool censored = false;  // ran past the horizon without crossing
};

// One draw of the first passage time from 0 to the boundary at L.
//  - Brownian models: exact inverse-Gaussian draw (mean L/v, shape L^2/D).
//  - Deterministic drift: L/v, no randomness.
//  - Jump models: Euler steps of cfg.dt with exact Gaussian increments,
//    Poisson jump counts per step, and a Brownian-bridge crossing test
//    between steps; censored at cfg.horizon.
PassageSample sample_passage_time(const LevyModel& model, double boundary,
                                  const SimConfig& cfg, std::mt19937_64& rng);

// Binomial estimate of P(T_L < S_1) with S_1 ~ Exp(lambda1), by direct
// comparison of sampled passage times against sampled settling clocks.
EstimateWithError estimate_washout(const LevyModel& model, double lambda1,
                                   double boundary, const SimConfig& cfg);

// Sample mean of T_L over cfg.n_paths draws; censored draws are excluded
// from the mean and reported in the censored field.
EstimateWithError estimate_mean_passage_time(const LevyModel& model,
                                             double boundary,
                                             const SimConfig& cfg);

struct PopulationEvent {
  double time = 0.0;
  std::int64_t benthic = 0;
  std::int64_t mobile = 0;
};

struct PopulationTrajectory {
  std::vector<PopulationEvent> events;  // populated when recording is on
  bool extinct = false;
  std::optional<double> extinction_time;
  bool capped = false;  // hit the population cap: survived (capped)
  std::int64_t peak_population = 0;
  std::int64_t censored_passages = 0;
};

// Event-driven simulation of the two-regime population in reset mode: every
// departure drifts from distance L, faces its own passage-vs-settling race,
// and either washes out at T_L or rejoins the benthos at S_1. Benthic
// individuals branch at growth_rate and depart at departure_rate,
// independently. Truncated at cfg.horizon or cfg.population_cap. The
// replicate index selects the (cfg.seed, replicate) substream, matching the
// streams used by the replicate estimators below.
PopulationTrajectory simulate_population(const LevyModel& model,
                                         const RegimeParams& params,
                                         double boundary,
                                         std::int64_t initial_benthic,
                                         const SimConfig& cfg,
                                         bool record_events = true,
                                         std::uint64_t replicate = 0);

// Fraction of replicate populations extinct by the horizon, binomial se.
// Replicate k uses substream (cfg.seed, k).
EstimateWithError estimate_extinction_probability(
    const LevyModel& model, const RegimeParams& params, double boundary,
    std::int64_t initial_benthic, std::int64_t replicates,
    const SimConfig& cfg);

// Per-individual tallies over completed lifetimes, for the branching-process
// identities: mean benthic phases per individual -> 1/pi, and mean offspring
// -> (r/lambda0)(1/pi). Only individuals washed out by the horizon count.
struct LineageStats {
  EstimateWithError offspring;
  EstimateWithError benthic_phases;
};

LineageStats population_lineage_stats(const LevyModel& model,
                                      const RegimeParams& params,
                                      double boundary,
                                      std::int64_t initial_benthic,
                                      std::int64_t replicates,
                                      const SimConfig& cfg);

// Branching Brownian motion with drift v < 0, absorbed at the origin,
// binary splits at rate r, started at x0 > 0. Each replicate is exact:
// exponential branch times, Gaussian displacement, bridge absorption test.
// A replicate survives when a particle is alive at the horizon or the
// creation count reaches cfg.population_cap.
struct BbmReport {
  std::vector<std::uint8_t> survived;  // one flag per replicate
  EstimateWithError survival_fraction;
  std::int64_t capped_replicates = 0;
};

BbmReport simulate_bbm_kesten(double D, double r, double v, double x0,
                              std::int64_t replicates, const SimConfig& cfg);

// Built-in test functions for the clone-branching check.
enum class CloneTestFunction { linear, square, gaussian };

double clone_test_function_value(CloneTestFunction f, double x);

struct CloneCheckReport {
  double t = 0.0;
  double mc_mean = 0.0;        // MC estimate of E[N_t f(Y_t)]
  double mc_std_error = 0.0;
  double analytic = 0.0;       // exp(r t) * E f(Y_t), closed form
  double martingale_gap = 0.0; // MC estimate of E M_t - M_0
  double martingale_gap_std_error = 0.0;
  std::int64_t n = 0;
};

// Checks the clone-branching identity E[N_t f(Y_t)] = exp(rt) E f(Y_t) with
// N ~ Yule(r) independent of Y_t ~ Normal(x0 + v t, D t), and estimates the
// martingale defect E[N_t f(Y_t) - integral_0^t A_r N_s f(Y_s) ds] - f(x0)
// along simulated paths. Both should vanish to within Monte Carlo error.
CloneCheckReport clone_model_check(double D, double v, double r,
                                   CloneTestFunction f, double x0, double t,
                                   const SimConfig& cfg);

// Yule-Furry population size at time t: geometric on {1, 2, ...} with
// success probability exp(-r t).
std::int64_t sample_yule(double r, double t, std::mt19937_64& rng);

}  // namespace benthos
