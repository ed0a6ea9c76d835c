// benthos: wash-out probabilities, critical domain lengths, and Monte Carlo
// checks for a two-regime population drifting over a spectrally negative
// Levy flow.

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "benthos/config.hpp"
#include "benthos/format.hpp"
#include "benthos/levy.hpp"
#include "benthos/passage.hpp"
#include "benthos/persistence.hpp"
#include "benthos/rng.hpp"
#include "benthos/simulate.hpp"
#include "benthos/validation.hpp"

namespace {

using nlohmann::json;

struct CommonState {
  benthos::ModelSpec model;
  benthos::RegimeParams regime{1.0, 2.0, 1.0};
  benthos::SimConfig sim;
  std::string format = "csv";  // csv | json
  std::string output;          // empty = stdout
};

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void add_model_flags(CLI::App* cmd, benthos::ModelSpec& m) {
  cmd->add_option("--model", m.family,
                  "Model family: brownian | deterministic | "
                  "exponential-jumps | fixed-jumps")
      ->capture_default_str();
  cmd->add_option("--v", m.v, "Linear drift velocity")->capture_default_str();
  cmd->add_option("--D", m.D, "Diffusion coefficient")->capture_default_str();
  cmd->add_option("--jump-rate", m.jump_rate, "Downward jump rate")
      ->capture_default_str();
  cmd->add_option("--jump-mean", m.jump_mean,
                  "Mean jump size (exponential-jumps)")
      ->capture_default_str();
  cmd->add_option("--jump-size", m.jump_size, "Jump size (fixed-jumps)")
      ->capture_default_str();
}

void add_regime_flags(CLI::App* cmd, benthos::RegimeParams& p) {
  cmd->add_option("--r", p.growth_rate, "Benthic growth rate r")
      ->capture_default_str();
  cmd->add_option("--lambda0", p.departure_rate, "Departure rate lambda0")
      ->capture_default_str();
  cmd->add_option("--lambda1", p.settling_rate, "Settling rate lambda1")
      ->capture_default_str();
}

void add_sim_flags(CLI::App* cmd, benthos::SimConfig& s) {
  cmd->add_option("--seed", s.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--paths", s.n_paths, "Monte Carlo sample size")
      ->capture_default_str();
  cmd->add_option("--dt", s.dt, "Euler step for jump models")
      ->capture_default_str();
  cmd->add_option("--horizon", s.horizon, "Simulation time horizon")
      ->capture_default_str();
  cmd->add_option("--cap", s.population_cap,
                  "Population cap; reaching it counts as survival")
      ->capture_default_str();
  cmd->add_option("--threads", s.threads, "Worker threads")
      ->capture_default_str();
}

void add_io_flags(CLI::App* cmd, CommonState& st) {
  cmd->add_option("--format", st.format, "Output format: csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output", st.output, "Output file (default stdout)");
}

void add_config_flag(CLI::App* cmd, std::string& path) {
  cmd->add_option("--config", path,
                  "Config file with [model]/[regime]/[sim] sections "
                  "(flags override file values)");
}

benthos::LevyModel checked_model(const benthos::ModelSpec& spec) {
  benthos::LevyModel model = benthos::build_model(spec);
  benthos::require_valid(model);
  return model;
}

// ---- critical-length ------------------------------------------------------

int cmd_critical_length(const CommonState& st) {
  const benthos::LevyModel model = checked_model(st.model);
  benthos::require_valid(st.regime);
  const benthos::PersistenceVerdict verdict =
      benthos::persistence_verdict(model, st.regime);

  if (st.format == "json") {
    json out;
    out["verdict"] = verdict.always_persists ? "AlwaysPersists" : "CriticalLength";
    if (!verdict.always_persists) {
      out["criticalLength"] = verdict.critical_length;
      out["asymptotic"] = benthos::asymptotic_critical_length(
          benthos::effective_velocity(model), st.regime);
      out["degenerate"] = verdict.degenerate;
      out["roundTripResidual"] =
          verdict.degenerate
              ? 0.0
              : benthos::critical_length_round_trip_residual(
                    model, st.regime, verdict.critical_length);
    }
    write_output(out.dump(2) + "\n", st.output);
    return 0;
  }

  std::ostringstream out;
  if (verdict.always_persists) {
    out << "verdict: AlwaysPersists\n";
    out << "growth rate exceeds departure rate; no finite domain washes the "
           "population out\n";
  } else {
    out << "verdict: CriticalLength\n";
    if (verdict.degenerate) {
      out << "degenerate: growth exactly balances departure\n";
    }
    out << "L_c = " << benthos::g17(verdict.critical_length) << "\n";
    out << "asymptotic = "
        << benthos::g17(benthos::asymptotic_critical_length(
               benthos::effective_velocity(model), st.regime))
        << "\n";
    const double residual =
        verdict.degenerate ? 0.0
                           : benthos::critical_length_round_trip_residual(
                                 model, st.regime, verdict.critical_length);
    out << "round-trip residual = " << benthos::g17(residual) << "\n";
  }
  write_output(out.str(), st.output);
  return 0;
}

// ---- curve -----------------------------------------------------------------

struct GridSpec {
  std::vector<double> explicit_grid;
  double v_min = 0.5;
  double v_max = 64.0;
  int points = 0;  // 0 = use explicit grid
  bool log_spacing = false;
};

std::vector<double> resolve_grid(const GridSpec& spec) {
  std::vector<double> grid;
  if (!spec.explicit_grid.empty()) {
    grid = spec.explicit_grid;
  } else {
    const int n = spec.points > 0 ? spec.points : 8;
    if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
    if (spec.log_spacing && !(spec.v_min > 0.0)) {
      throw std::invalid_argument("log spacing needs v-min > 0");
    }
    grid.reserve(n);
    for (int i = 0; i < n; ++i) {
      const double f = static_cast<double>(i) / (n - 1);
      grid.push_back(spec.log_spacing
                         ? spec.v_min * std::pow(spec.v_max / spec.v_min, f)
                         : spec.v_min + f * (spec.v_max - spec.v_min));
    }
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("grid must be strictly increasing");
    }
  }
  if (grid.empty()) throw std::invalid_argument("grid is empty");
  return grid;
}

int cmd_curve(const CommonState& st, const GridSpec& grid_spec) {
  const benthos::ModelSpec base_spec = st.model;
  benthos::LevyModel base = benthos::build_model(base_spec);
  benthos::require_valid(st.regime);
  const std::vector<double> grid = resolve_grid(grid_spec);
  const std::vector<benthos::CurveRow> rows =
      benthos::critical_curve(base, st.regime, grid);

  bool any_failed = false;
  bool any_ok = false;
  for (const auto& row : rows) {
    if (row.error.empty()) {
      any_ok = true;
    } else {
      any_failed = true;
    }
  }

  if (st.format == "json") {
    json out = json::array();
    for (const auto& row : rows) {
      json item;
      item["v"] = row.v;
      item["L_c"] = row.critical_length;
      item["L_c_asymptotic"] = row.asymptotic_length;
      item["ratio"] = row.ratio;
      if (!row.error.empty()) item["error"] = row.error;
      out.push_back(item);
    }
    write_output(out.dump(2) + "\n", st.output);
  } else {
    std::ostringstream out;
    out << "v,L_c,L_c_asymptotic,ratio";
    if (any_failed) out << ",error";
    out << "\n";
    for (const auto& row : rows) {
      out << benthos::g17(row.v) << "," << benthos::g17(row.critical_length)
          << "," << benthos::g17(row.asymptotic_length) << ","
          << benthos::g17(row.ratio);
      if (any_failed) out << "," << benthos::csv_field(row.error);
      out << "\n";
    }
    write_output(out.str(), st.output);
  }
  return any_ok ? 0 : 2;
}

// ---- validate ---------------------------------------------------------------

const char* rule_name(benthos::CheckRule rule) {
  switch (rule) {
    case benthos::CheckRule::four_se:
      return "4se";
    case benthos::CheckRule::upper_bound:
      return "upper";
    case benthos::CheckRule::lower_bound:
      return "lower";
  }
  return "?";
}

int cmd_validate(const CommonState& st) {
  // Reject broken inputs before spending time on the suite.
  checked_model(st.model);
  benthos::require_valid(st.regime);
  benthos::require_valid(st.sim);

  const benthos::ValidationReport report =
      benthos::run_validation_suite(st.sim);

  if (st.format == "json") {
    json out = json::array();
    for (const auto& check : report.checks) {
      json item;
      item["check"] = check.name;
      item["rule"] = rule_name(check.rule);
      item["analytic"] = check.analytic;
      item["estimate"] = check.estimate;
      item["stdError"] = check.std_error;
      item["passed"] = check.passed;
      out.push_back(item);
    }
    write_output(out.dump(2) + "\n", st.output);
  } else {
    std::ostringstream out;
    out << "check,rule,analytic,estimate,stdError,passed\n";
    for (const auto& check : report.checks) {
      out << benthos::csv_field(check.name) << "," << rule_name(check.rule)
          << "," << benthos::g17(check.analytic) << ","
          << benthos::g17(check.estimate) << ","
          << benthos::g17(check.std_error) << ","
          << (check.passed ? "1" : "0") << "\n";
    }
    write_output(out.str(), st.output);
  }

  std::size_t passed = 0;
  for (const auto& check : report.checks) passed += check.passed ? 1 : 0;
  std::cerr << passed << "/" << report.checks.size() << " checks passed\n";
  return report.all_passed() ? 0 : 1;
}

// ---- simulate ---------------------------------------------------------------

struct PopulationArgs {
  double boundary = 1.0;
  std::int64_t replicates = 100;
  std::int64_t initial = 20;
  bool trajectory = false;
};

int cmd_simulate_population(const CommonState& st, const PopulationArgs& args) {
  const benthos::LevyModel model = checked_model(st.model);
  benthos::require_valid(st.regime);

  if (args.trajectory) {
    const benthos::PopulationTrajectory traj = benthos::simulate_population(
        model, st.regime, args.boundary, args.initial, st.sim, true, 0);
    if (st.format == "json") {
      json out = json::array();
      for (const auto& ev : traj.events) {
        json item;
        item["time"] = ev.time;
        item["benthic"] = ev.benthic;
        item["mobile"] = ev.mobile;
        out.push_back(item);
      }
      write_output(out.dump(2) + "\n", st.output);
    } else {
      std::ostringstream out;
      out << "time,benthic,mobile\n";
      for (const auto& ev : traj.events) {
        out << benthos::g17(ev.time) << "," << ev.benthic << "," << ev.mobile
            << "\n";
      }
      write_output(out.str(), st.output);
    }
    if (traj.censored_passages > 0) {
      std::cerr << "note: " << traj.censored_passages
                << " passage draws censored at the horizon\n";
    }
    return 0;
  }

  std::vector<benthos::PopulationTrajectory> trajectories;
  trajectories.reserve(static_cast<std::size_t>(args.replicates));
  for (std::int64_t k = 0; k < args.replicates; ++k) {
    trajectories.push_back(benthos::simulate_population(
        model, st.regime, args.boundary, args.initial, st.sim, false,
        static_cast<std::uint64_t>(k)));
  }

  std::int64_t extinct = 0;
  std::int64_t censored = 0;
  for (const auto& traj : trajectories) {
    extinct += traj.extinct ? 1 : 0;
    censored += traj.censored_passages;
  }

  if (st.format == "json") {
    json out = json::array();
    for (std::int64_t k = 0; k < args.replicates; ++k) {
      const auto& traj = trajectories[static_cast<std::size_t>(k)];
      json item;
      item["replicate"] = k;
      item["extinct"] = traj.extinct;
      if (traj.extinct) item["extinctionTime"] = *traj.extinction_time;
      out.push_back(item);
    }
    write_output(out.dump(2) + "\n", st.output);
  } else {
    std::ostringstream out;
    out << "replicate,extinct,extinctionTime\n";
    for (std::int64_t k = 0; k < args.replicates; ++k) {
      const auto& traj = trajectories[static_cast<std::size_t>(k)];
      out << k << "," << (traj.extinct ? 1 : 0) << ",";
      if (traj.extinct) out << benthos::g17(*traj.extinction_time);
      out << "\n";
    }
    write_output(out.str(), st.output);
  }
  std::cerr << "extinct " << extinct << "/" << args.replicates;
  if (censored > 0) std::cerr << " (censored passages: " << censored << ")";
  std::cerr << "\n";
  return 0;
}

int cmd_simulate_washout(const CommonState& st, double boundary) {
  const benthos::LevyModel model = checked_model(st.model);
  benthos::require_valid(st.regime);
  const double analytic = benthos::washout_probability(
      model, st.regime.settling_rate, boundary);
  const benthos::EstimateWithError est = benthos::estimate_washout(
      model, st.regime.settling_rate, boundary, st.sim);
  const double diff = std::abs(est.mean - analytic);
  const double z = diff == 0.0 ? 0.0 : diff / est.std_error;

  if (st.format == "json") {
    json out;
    out["estimate"] = est.mean;
    out["stdError"] = est.std_error;
    out["analytic"] = analytic;
    out["z"] = z;
    write_output(out.dump(2) + "\n", st.output);
  } else {
    std::ostringstream out;
    out << "estimate,stdError,analytic,z\n";
    out << benthos::g17(est.mean) << "," << benthos::g17(est.std_error) << ","
        << benthos::g17(analytic) << "," << benthos::g17(z) << "\n";
    write_output(out.str(), st.output);
  }
  if (est.censored > 0) {
    std::cerr << "note: " << est.censored
              << " paths censored at the horizon\n";
  }
  return 0;
}

struct BbmArgs {
  double x0 = 1.0;
  std::int64_t replicates = 200;
};

int cmd_simulate_bbm(const CommonState& st, const BbmArgs& args) {
  const benthos::BbmReport report = benthos::simulate_bbm_kesten(
      st.model.D, st.regime.growth_rate, st.model.v, args.x0, args.replicates,
      st.sim);

  if (st.format == "json") {
    json out;
    out["survival"] = report.survival_fraction.mean;
    out["stdError"] = report.survival_fraction.std_error;
    out["replicates"] = args.replicates;
    out["capped"] = report.capped_replicates;
    write_output(out.dump(2) + "\n", st.output);
  } else {
    std::ostringstream out;
    out << "survival,stdError,replicates,capped\n";
    out << benthos::g17(report.survival_fraction.mean) << ","
        << benthos::g17(report.survival_fraction.std_error) << ","
        << args.replicates << "," << report.capped_replicates << "\n";
    write_output(out.str(), st.output);
  }
  return 0;
}

struct CloneArgs {
  std::string f = "linear";  // linear | square | gaussian
  double x0 = 0.0;
  std::vector<double> times{1.0};
};

benthos::CloneTestFunction parse_clone_function(const std::string& name) {
  if (name == "linear") return benthos::CloneTestFunction::linear;
  if (name == "square") return benthos::CloneTestFunction::square;
  if (name == "gaussian") return benthos::CloneTestFunction::gaussian;
  throw std::invalid_argument("unknown test function '" + name +
                              "' (expected linear | square | gaussian)");
}

int cmd_simulate_clone_check(const CommonState& st, const CloneArgs& args) {
  const benthos::CloneTestFunction f = parse_clone_function(args.f);
  std::vector<benthos::CloneCheckReport> reports;
  for (const double t : args.times) {
    reports.push_back(benthos::clone_model_check(
        st.model.D, st.model.v, st.regime.growth_rate, f, args.x0, t, st.sim));
  }

  if (st.format == "json") {
    json out = json::array();
    for (const auto& rep : reports) {
      json item;
      item["f"] = args.f;
      item["t"] = rep.t;
      item["mcMean"] = rep.mc_mean;
      item["mcStdError"] = rep.mc_std_error;
      item["analytic"] = rep.analytic;
      item["martingaleGap"] = rep.martingale_gap;
      item["martingaleGapStdError"] = rep.martingale_gap_std_error;
      item["n"] = rep.n;
      out.push_back(item);
    }
    write_output(out.dump(2) + "\n", st.output);
  } else {
    std::ostringstream out;
    out << "f,t,mcMean,mcStdError,analytic,martingaleGap,"
           "martingaleGapStdError,n\n";
    for (const auto& rep : reports) {
      out << args.f << "," << benthos::g17(rep.t) << ","
          << benthos::g17(rep.mc_mean) << "," << benthos::g17(rep.mc_std_error)
          << "," << benthos::g17(rep.analytic) << ","
          << benthos::g17(rep.martingale_gap) << ","
          << benthos::g17(rep.martingale_gap_std_error) << "," << rep.n
          << "\n";
    }
    write_output(out.str(), st.output);
  }
  return 0;
}

// ---- config/env plumbing -----------------------------------------------------

std::string find_config_argument(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

void apply_seed_env(benthos::SimConfig& sim) {
  const char* raw = std::getenv("BENTHOS_SEED");
  if (raw == nullptr || *raw == '\0') return;
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (*end != '\0' || errno == ERANGE) {
    throw std::invalid_argument(std::string("BENTHOS_SEED is not an integer: ") +
                                raw);
  }
  sim.seed = value;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    CommonState st;
    apply_seed_env(st.sim);
    const std::string config_path = find_config_argument(argc, argv);
    if (!config_path.empty()) {
      benthos::apply_config(benthos::load_config_file(config_path), st.model,
                            st.regime, st.sim);
    }

    CLI::App app{
        "Critical domain lengths and wash-out probabilities for benthic "
        "populations over drifting flows"};
    app.require_subcommand(1);
    std::string config_dummy;
    add_config_flag(&app, config_dummy);

    std::function<int()> action;

    // critical-length
    CLI::App* critical =
        app.add_subcommand("critical-length",
                           "Persistence verdict and critical domain length");
    add_model_flags(critical, st.model);
    add_regime_flags(critical, st.regime);
    add_io_flags(critical, st);
    add_config_flag(critical, config_dummy);
    critical->callback([&] { action = [&] { return cmd_critical_length(st); }; });

    // curve
    GridSpec grid_spec;
    CLI::App* curve = app.add_subcommand(
        "curve", "Critical length across a grid of drift velocities");
    add_model_flags(curve, st.model);
    add_regime_flags(curve, st.regime);
    add_io_flags(curve, st);
    add_config_flag(curve, config_dummy);
    curve->add_option("--grid", grid_spec.explicit_grid,
                      "Explicit drift grid (strictly increasing)")
        ->delimiter(',');
    curve->add_option("--v-min", grid_spec.v_min, "Grid start")
        ->capture_default_str();
    curve->add_option("--v-max", grid_spec.v_max, "Grid end")
        ->capture_default_str();
    curve->add_option("--points", grid_spec.points,
                      "Number of grid points (default 8)");
    curve->add_flag("--log", grid_spec.log_spacing, "Log-spaced grid");
    curve->callback([&] { action = [&] { return cmd_curve(st, grid_spec); }; });

    // validate
    CLI::App* validate = app.add_subcommand(
        "validate", "Monte Carlo cross-validation of the analytic layer");
    add_model_flags(validate, st.model);
    add_regime_flags(validate, st.regime);
    add_sim_flags(validate, st.sim);
    add_io_flags(validate, st);
    add_config_flag(validate, config_dummy);
    validate->callback([&] { action = [&] { return cmd_validate(st); }; });

    // simulate
    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo engines");
    simulate->require_subcommand(1);

    PopulationArgs pop_args;
    CLI::App* population = simulate->add_subcommand(
        "population", "Two-regime population replicates or one trajectory");
    add_model_flags(population, st.model);
    add_regime_flags(population, st.regime);
    add_sim_flags(population, st.sim);
    add_io_flags(population, st);
    add_config_flag(population, config_dummy);
    population->add_option("--L", pop_args.boundary, "Domain length")
        ->required();
    population->add_option("--replicates", pop_args.replicates,
                           "Replicate count")
        ->capture_default_str();
    population->add_option("--initial", pop_args.initial,
                           "Initial benthic population")
        ->capture_default_str();
    population->add_flag("--trajectory", pop_args.trajectory,
                         "Emit one full event trajectory instead of summaries");
    population->callback(
        [&] { action = [&] { return cmd_simulate_population(st, pop_args); }; });

    double washout_boundary = 1.0;
    CLI::App* washout = simulate->add_subcommand(
        "washout", "Wash-out probability estimate vs the analytic transform");
    add_model_flags(washout, st.model);
    add_regime_flags(washout, st.regime);
    add_sim_flags(washout, st.sim);
    add_io_flags(washout, st);
    add_config_flag(washout, config_dummy);
    washout->add_option("--L", washout_boundary, "Domain length")->required();
    washout->callback([&] {
      action = [&] { return cmd_simulate_washout(st, washout_boundary); };
    });

    BbmArgs bbm_args;
    CLI::App* bbm = simulate->add_subcommand(
        "bbm", "Branching Brownian motion with absorption (Kesten regime)");
    add_model_flags(bbm, st.model);
    add_regime_flags(bbm, st.regime);
    add_sim_flags(bbm, st.sim);
    add_io_flags(bbm, st);
    add_config_flag(bbm, config_dummy);
    bbm->add_option("--x0", bbm_args.x0, "Starting position")
        ->capture_default_str();
    bbm->add_option("--replicates", bbm_args.replicates, "Replicate count")
        ->capture_default_str();
    bbm->callback([&] { action = [&] { return cmd_simulate_bbm(st, bbm_args); }; });

    CloneArgs clone_args;
    CLI::App* clone = simulate->add_subcommand(
        "clone-check", "Clone/martingale consistency check for e^{rt} E f(Y_t)");
    add_model_flags(clone, st.model);
    add_regime_flags(clone, st.regime);
    add_sim_flags(clone, st.sim);
    add_io_flags(clone, st);
    add_config_flag(clone, config_dummy);
    clone->add_option("--f", clone_args.f,
                      "Test function: linear | square | gaussian")
        ->capture_default_str();
    clone->add_option("--x0", clone_args.x0, "Starting position")
        ->capture_default_str();
    clone->add_option("--t", clone_args.times, "Evaluation times")
        ->delimiter(',')
        ->capture_default_str();
    clone->callback([&] {
      action = [&] { return cmd_simulate_clone_check(st, clone_args); };
    });

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }
    if (!action) {
      std::cerr << "error: no command selected\n";
      return 2;
    }
    return action();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
