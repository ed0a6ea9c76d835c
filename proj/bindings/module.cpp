#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "benthos/levy.hpp"
#include "benthos/passage.hpp"
#include "benthos/persistence.hpp"
#include "benthos/simulate.hpp"
#include "benthos/validation.hpp"

namespace py = pybind11;
using namespace benthos;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Wash-out probabilities, first-passage transforms, and critical domain "
      "lengths for benthic populations drifting over a spectrally negative "
      "Levy flow, with Monte Carlo cross-checks.";

  py::class_<LevyModel>(m, "LevyModel")
      .def_readonly("linear_drift", &LevyModel::linear_drift)
      .def_readonly("diffusion", &LevyModel::diffusion)
      .def_property_readonly(
          "effective_velocity",
          [](const LevyModel& model) { return effective_velocity(model); })
      .def("__repr__", [](const LevyModel& model) {
        return "<LevyModel drift=" + std::to_string(model.linear_drift) +
               " D=" + std::to_string(model.diffusion) + ">";
      });

  m.def("brownian", &LevyModel::brownian, py::arg("v"), py::arg("D"),
        "Drift v plus Brownian noise with diffusion coefficient D.");
  m.def("deterministic", &LevyModel::deterministic, py::arg("v"),
        "Pure drift, no noise.");
  m.def("with_exponential_jumps", &LevyModel::with_exponential_jumps,
        py::arg("drift"), py::arg("D"), py::arg("rate"), py::arg("mean_size"),
        "Drift/diffusion plus downward exponential jumps.");
  m.def("with_fixed_jumps", &LevyModel::with_fixed_jumps, py::arg("drift"),
        py::arg("D"), py::arg("rate"), py::arg("size"),
        "Drift/diffusion plus downward fixed-size jumps.");
  m.def("laplace_exponent", &laplace_exponent, py::arg("model"),
        py::arg("theta"), "psi(theta) = log E exp(theta Y_1).");
  m.def("validate_model",
        py::overload_cast<const LevyModel&>(&validate), py::arg("model"),
        "List of violated invariants; empty when the model is valid.");

  m.def("inverse_laplace_exponent", &inverse_laplace_exponent,
        py::arg("model"), py::arg("s"),
        "Phi(s): the unique positive root of psi(theta) = s.");
  m.def("passage_time_transform",
        py::overload_cast<const LevyModel&, double, double>(
            &passage_time_transform),
        py::arg("model"), py::arg("boundary"), py::arg("s"),
        "E exp(-s T_L) = exp(-L Phi(s)).");
  m.def("washout_probability", &washout_probability, py::arg("model"),
        py::arg("lambda1"), py::arg("boundary"),
        "P(T_L < S_1) for an Exp(lambda1) settling clock.");
  m.def("mean_passage_time", &mean_passage_time, py::arg("model"),
        py::arg("boundary"), "E T_L = L / effective velocity.");

  py::class_<RegimeParams>(m, "RegimeParams")
      .def(py::init([](double r, double lambda0, double lambda1) {
             return RegimeParams{r, lambda0, lambda1};
           }),
           py::arg("r"), py::arg("lambda0"), py::arg("lambda1"))
      .def_readwrite("r", &RegimeParams::growth_rate)
      .def_readwrite("lambda0", &RegimeParams::departure_rate)
      .def_readwrite("lambda1", &RegimeParams::settling_rate);

  py::class_<PersistenceVerdict>(m, "PersistenceVerdict")
      .def_readonly("always_persists", &PersistenceVerdict::always_persists)
      .def_readonly("critical_length", &PersistenceVerdict::critical_length)
      .def_readonly("degenerate", &PersistenceVerdict::degenerate);

  m.def("persistence_verdict", &persistence_verdict, py::arg("model"),
        py::arg("params"),
        "AlwaysPersists when r > lambda0, else the critical domain length.");
  m.def("critical_length_brownian_closed_form",
        &critical_length_brownian_closed_form, py::arg("v"), py::arg("D"),
        py::arg("params"));
  m.def("asymptotic_critical_length", &asymptotic_critical_length,
        py::arg("v"), py::arg("params"),
        "Large-drift asymptote v ln(lambda0/r) / lambda1.");
  m.def("critical_length_round_trip_residual",
        &critical_length_round_trip_residual, py::arg("model"),
        py::arg("params"), py::arg("length"),
        "|lambda0 pi(lambda1, L) / r - 1| at the claimed critical length.");

  py::class_<CurveRow>(m, "CurveRow")
      .def_readonly("v", &CurveRow::v)
      .def_readonly("critical_length", &CurveRow::critical_length)
      .def_readonly("asymptotic_length", &CurveRow::asymptotic_length)
      .def_readonly("ratio", &CurveRow::ratio)
      .def_readonly("error", &CurveRow::error);

  m.def(
      "critical_curve",
      [](const LevyModel& base, const RegimeParams& params,
         const std::vector<double>& grid) {
        return critical_curve(base, params,
                              std::span<const double>(grid.data(), grid.size()));
      },
      py::arg("base"), py::arg("params"), py::arg("drift_grid"),
      "Critical and asymptotic lengths across a grid of drift velocities.");

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init([](std::uint64_t seed, std::int64_t n_paths, double dt,
                       double horizon, std::int64_t population_cap,
                       int threads) {
             SimConfig cfg;
             cfg.seed = seed;
             cfg.n_paths = n_paths;
             cfg.dt = dt;
             cfg.horizon = horizon;
             cfg.population_cap = population_cap;
             cfg.threads = threads;
             return cfg;
           }),
           py::arg("seed") = SimConfig{}.seed,
           py::arg("n_paths") = SimConfig{}.n_paths,
           py::arg("dt") = SimConfig{}.dt,
           py::arg("horizon") = SimConfig{}.horizon,
           py::arg("population_cap") = SimConfig{}.population_cap,
           py::arg("threads") = SimConfig{}.threads)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("n_paths", &SimConfig::n_paths)
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("horizon", &SimConfig::horizon)
      .def_readwrite("population_cap", &SimConfig::population_cap)
      .def_readwrite("threads", &SimConfig::threads);

  py::class_<EstimateWithError>(m, "EstimateWithError")
      .def_readonly("mean", &EstimateWithError::mean)
      .def_readonly("std_error", &EstimateWithError::std_error)
      .def_readonly("n", &EstimateWithError::n)
      .def_readonly("censored", &EstimateWithError::censored)
      .def("__repr__", [](const EstimateWithError& est) {
        return "<EstimateWithError mean=" + std::to_string(est.mean) +
               " se=" + std::to_string(est.std_error) + ">";
      });

  m.def("estimate_washout", &estimate_washout, py::arg("model"),
        py::arg("lambda1"), py::arg("boundary"), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>(),
        "Monte Carlo wash-out probability with binomial standard error.");
  m.def("estimate_mean_passage_time", &estimate_mean_passage_time,
        py::arg("model"), py::arg("boundary"), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<PopulationEvent>(m, "PopulationEvent")
      .def_readonly("time", &PopulationEvent::time)
      .def_readonly("benthic", &PopulationEvent::benthic)
      .def_readonly("mobile", &PopulationEvent::mobile);

  py::class_<PopulationTrajectory>(m, "PopulationTrajectory")
      .def_readonly("events", &PopulationTrajectory::events)
      .def_readonly("extinct", &PopulationTrajectory::extinct)
      .def_readonly("extinction_time", &PopulationTrajectory::extinction_time)
      .def_readonly("capped", &PopulationTrajectory::capped)
      .def_readonly("peak_population", &PopulationTrajectory::peak_population)
      .def_readonly("censored_passages",
                    &PopulationTrajectory::censored_passages);

  m.def("simulate_population", &simulate_population, py::arg("model"),
        py::arg("params"), py::arg("boundary"), py::arg("initial_benthic"),
        py::arg("cfg"), py::arg("record_events") = true,
        py::arg("replicate") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("estimate_extinction_probability", &estimate_extinction_probability,
        py::arg("model"), py::arg("params"), py::arg("boundary"),
        py::arg("initial_benthic"), py::arg("replicates"), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<LineageStats>(m, "LineageStats")
      .def_readonly("offspring", &LineageStats::offspring)
      .def_readonly("benthic_phases", &LineageStats::benthic_phases);

  m.def("population_lineage_stats", &population_lineage_stats,
        py::arg("model"), py::arg("params"), py::arg("boundary"),
        py::arg("initial_benthic"), py::arg("replicates"), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<BbmReport>(m, "BbmReport")
      .def_readonly("survived", &BbmReport::survived)
      .def_readonly("survival_fraction", &BbmReport::survival_fraction)
      .def_readonly("capped_replicates", &BbmReport::capped_replicates);

  m.def("simulate_bbm_kesten", &simulate_bbm_kesten, py::arg("D"),
        py::arg("r"), py::arg("v"), py::arg("x0"), py::arg("replicates"),
        py::arg("cfg"), py::call_guard<py::gil_scoped_release>(),
        "Branching Brownian motion with absorption at 0; survival at the "
        "horizon.");

  py::enum_<CloneTestFunction>(m, "CloneTestFunction")
      .value("linear", CloneTestFunction::linear)
      .value("square", CloneTestFunction::square)
      .value("gaussian", CloneTestFunction::gaussian);

  py::class_<CloneCheckReport>(m, "CloneCheckReport")
      .def_readonly("t", &CloneCheckReport::t)
      .def_readonly("mc_mean", &CloneCheckReport::mc_mean)
      .def_readonly("mc_std_error", &CloneCheckReport::mc_std_error)
      .def_readonly("analytic", &CloneCheckReport::analytic)
      .def_readonly("martingale_gap", &CloneCheckReport::martingale_gap)
      .def_readonly("martingale_gap_std_error",
                    &CloneCheckReport::martingale_gap_std_error)
      .def_readonly("n", &CloneCheckReport::n);

  m.def("clone_model_check", &clone_model_check, py::arg("D"), py::arg("v"),
        py::arg("r"), py::arg("f"), py::arg("x0"), py::arg("t"),
        py::arg("cfg"), py::call_guard<py::gil_scoped_release>(),
        "MC check of E[N_t f(Y_t)] = e^{rt} E f(Y_t) plus the martingale "
        "defect.");

  py::enum_<CheckRule>(m, "CheckRule")
      .value("four_se", CheckRule::four_se)
      .value("upper_bound", CheckRule::upper_bound)
      .value("lower_bound", CheckRule::lower_bound);

  py::class_<ValidationCheck>(m, "ValidationCheck")
      .def_readonly("name", &ValidationCheck::name)
      .def_readonly("rule", &ValidationCheck::rule)
      .def_readonly("analytic", &ValidationCheck::analytic)
      .def_readonly("estimate", &ValidationCheck::estimate)
      .def_readonly("std_error", &ValidationCheck::std_error)
      .def_readonly("passed", &ValidationCheck::passed);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("checks", &ValidationReport::checks)
      .def("all_passed", &ValidationReport::all_passed);

  m.def("run_validation_suite", &run_validation_suite, py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>(),
        "The full Monte Carlo cross-validation suite.");
}
