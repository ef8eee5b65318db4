// Python bindings for the simulator core: scenario compilation, single runs,
// sweeps, steady flows, the stable-region check and the run classifiers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pqmp/engine.hpp"

namespace py = pybind11;
using namespace pqmp;

namespace {

ControllerConfig make_controller(const std::string& kind, double lambda, double tau_s,
                                 double sigma, int update_period) {
    ControllerConfig c;
    c.kind = controller_kind_from_string(kind);
    c.lambda = lambda;
    c.tau_s = tau_s;
    c.sigma = sigma;
    c.update_period = update_period;
    c.validate();
    return c;
}

py::dict ledger_dict(const DelayLedger& ledger, const RegionMap& regions) {
    py::dict d;
    d["veh_delay_h"] = ledger.veh_delay_h();
    d["ped_delay_h"] = ledger.ped_delay_h();
    d["avg_veh_delay_min"] = ledger.avg_veh_delay_min();
    d["avg_ped_delay_min"] = ledger.avg_ped_delay_min();
    d["veh_entered"] = ledger.veh_entered;
    d["veh_exited"] = ledger.veh_exited;
    d["ped_generated"] = ledger.ped_generated;
    d["ped_exited"] = ledger.ped_exited;
    py::dict regional;
    for (int r = 0; r < regions.n_regions(); ++r) {
        py::dict rd;
        rd["veh_delay_h"] = ledger.veh_delay_region_s[r] / 3600.0;
        rd["ped_delay_h"] = ledger.ped_delay_region_s[r] / 3600.0;
        regional[py::str(regions.labels[r])] = rd;
    }
    d["regions"] = regional;
    return d;
}

py::dict summary_dict(const RunSummary& run, const Scenario& scenario) {
    py::dict d;
    d["seed"] = run.params.seed;
    d["controller"] = to_string(run.params.controller.kind);
    d["lambda"] = run.params.controller.lambda;
    d["tau_s"] = run.params.controller.tau_s;
    d["sigma"] = run.params.controller.sigma;
    d["demand_vph"] = run.params.demand_vph;
    d["veh_series"] = run.veh_series;
    d["ped_series"] = run.ped_series;
    d["veh_sumsq"] = run.veh_sumsq;
    d["cw_sumsq"] = run.cw_sumsq;
    d["ledger"] = ledger_dict(run.ledger, scenario.regions);
    d["person_delay_h"] = run.person_delay_hours(scenario.config.occupancy_pax_per_veh);
    d["classified"] = run.classified;
    if (run.classified) {
        d["veh_stable"] = run.verdicts.vehicles.stable;
        d["ped_stable"] = run.verdicts.pedestrians.stable;
    }
    if (!run.veh_arrival_rate.empty()) {
        d["veh_arrival_rate"] = run.veh_arrival_rate;
        d["cw_arrival_rate"] = run.cw_arrival_rate;
        d["sw_arrival_rate"] = run.sw_arrival_rate;
    }
    d["wall_ms"] = run.wall_ms;
    return d;
}

}  // namespace

PYBIND11_MODULE(_pqmp, m) {
    m.doc() = "Mesoscopic grid-network simulator with pedestrian-aware max-pressure control";

    py::class_<Scenario, std::unique_ptr<Scenario>>(m, "Scenario")
        .def_static(
            "from_json",
            [](const std::string& text) {
                return compile_scenario(ScenarioConfig::from_json_text(text));
            },
            py::arg("text"), "Compile a scenario from config JSON text")
        .def_static(
            "from_file",
            [](const std::string& path) {
                return compile_scenario(ScenarioConfig::from_file(path));
            },
            py::arg("path"), "Compile a scenario from a config file")
        .def_property_readonly("config_json",
                               [](const Scenario& s) { return s.config.to_json_text(); })
        .def_property_readonly("step_s", [](const Scenario& s) { return s.net.step_s(); })
        .def_property_readonly("n_intersections",
                               [](const Scenario& s) { return s.net.n_intersections; })
        .def_property_readonly("n_movements",
                               [](const Scenario& s) { return s.catalog.n_movements(); })
        .def_property_readonly("n_crosswalks",
                               [](const Scenario& s) { return s.catalog.n_crosswalks(); })
        .def_property_readonly("n_sidewalks",
                               [](const Scenario& s) { return s.catalog.n_sidewalks(); })
        .def_property_readonly("demand_levels",
                               [](const Scenario& s) { return s.config.demand_vph; })
        .def_property_readonly("seeds", [](const Scenario& s) { return s.config.seeds; })
        .def_property_readonly("od_generation_per_step",
                               [](const Scenario& s) { return s.od.total_generation_per_step; })
        .def(
            "run",
            [](const Scenario& s, const std::string& controller, double demand_vph,
               std::uint64_t seed, double lambda, double tau_s, double sigma,
               int update_period, bool record_flows) {
                RunParams p;
                p.controller =
                    make_controller(controller, lambda, tau_s, sigma, update_period);
                p.demand_vph = demand_vph;
                p.seed = seed;
                RunOptions opt;
                opt.record_flows = record_flows;
                py::gil_scoped_release release;
                const RunSummary run = run_once(s, p, opt);
                py::gil_scoped_acquire acquire;
                return summary_dict(run, s);
            },
            py::arg("controller"), py::arg("demand_vph"), py::arg("seed"),
            py::arg("lambda_") = 0.001, py::arg("tau_s") = 80.0, py::arg("sigma") = 0.0,
            py::arg("update_period") = 1, py::arg("record_flows") = false,
            "Simulate one run and return its summary")
        .def(
            "sweep",
            [](const Scenario& s, int parallel, const std::string& out_dir) {
                py::gil_scoped_release release;
                const SweepResult result = run_sweep(s, parallel);
                if (!out_dir.empty()) emit_report(s, result, out_dir);
                py::gil_scoped_acquire acquire;
                py::list rows;
                for (const CellAggregate& a : result.aggregates) {
                    py::dict d;
                    d["controller"] = to_string(a.cell.controller.kind);
                    d["lambda"] = a.cell.controller.lambda;
                    d["tau_s"] = a.cell.controller.tau_s;
                    d["sigma"] = a.cell.controller.sigma;
                    d["demand_vph"] = a.cell.demand_vph;
                    d["seed_count"] = a.seed_count;
                    d["veh_delay_h"] = a.veh_delay_h;
                    d["ped_delay_h"] = a.ped_delay_h;
                    d["person_delay_h"] = a.person_delay_h;
                    d["veh_stable_fraction"] = a.veh_stable_fraction;
                    d["ped_stable_fraction"] = a.ped_stable_fraction;
                    rows.append(d);
                }
                return rows;
            },
            py::arg("parallel") = 1, py::arg("out_dir") = "",
            "Run the configured sweep; returns aggregate rows, optionally "
            "writing the full report")
        .def(
            "emit_run_report",
            [](const Scenario& s, const std::string& controller, double demand_vph,
               std::uint64_t seed, double lambda, double tau_s, double sigma,
               const std::string& out_dir) {
                RunParams p;
                p.controller = make_controller(controller, lambda, tau_s, sigma, 1);
                p.demand_vph = demand_vph;
                p.seed = seed;
                const RunSummary run = run_once(s, p);
                emit_report(s, run, out_dir);
            },
            py::arg("controller"), py::arg("demand_vph"), py::arg("seed"),
            py::arg("lambda_") = 0.001, py::arg("tau_s") = 80.0, py::arg("sigma") = 0.0,
            py::arg("out_dir") = "out", "Simulate one run and write its report files")
        .def(
            "steady_flows",
            [](const Scenario& s, double demand_vph) {
                RateModel rates = s.rates;
                set_entry_demand_vph(s.catalog, rates, demand_vph);
                const SteadyFlows flows = solve_steady_flows(s.catalog, rates);
                py::dict d;
                d["veh"] = flows.veh;
                d["cw"] = flows.cw;
                d["sw"] = flows.sw;
                d["residual"] = steady_flow_residual(flows, s.catalog, rates);
                return d;
            },
            py::arg("demand_vph"),
            "Mean per-movement flows under the given entry demand")
        .def(
            "check_feasibility",
            [](const Scenario& s, double demand_vph, double ped_scale, bool ped_adjustment) {
                RateModel rates = s.rates;
                set_entry_demand_vph(s.catalog, rates, demand_vph);
                for (double& v : rates.ped_in) v *= ped_scale;
                for (double& v : rates.ped_out) v *= ped_scale;
                const SteadyFlows flows = solve_steady_flows(s.catalog, rates);
                FeasibilityOptions opt;
                opt.ped_adjustment = ped_adjustment;
                const FeasibilityResult res =
                    check_feasibility(flows, s.catalog, s.phases, rates, opt);
                py::dict d;
                d["feasible"] = res.feasible;
                d["slack"] = res.slack;
                d["intersection_slack"] = res.intersection_slack;
                d["pi"] = res.pi;
                return d;
            },
            py::arg("demand_vph"), py::arg("ped_scale") = 1.0,
            py::arg("ped_adjustment") = true,
            "Stable-region check for the given demand (pedestrian rates "
            "scaled by ped_scale)");

    m.def(
        "classify_series",
        [](const std::vector<double>& series, double theta) {
            const SeriesVerdict v = classify_series(series, theta);
            py::dict d;
            d["stable"] = v.stable;
            d["slope_per_step"] = v.slope_per_step;
            d["mean_level"] = v.mean_level;
            d["threshold"] = v.threshold;
            return d;
        },
        py::arg("series"), py::arg("theta") = 0.5,
        "Stable/unstable verdict for a loading-period series");

    m.def("lyapunov_drift",
          py::overload_cast<double, double, double, double, double>(&lyapunov_drift),
          py::arg("veh_sumsq_t"), py::arg("veh_sumsq_t1"), py::arg("cw_sumsq_t"),
          py::arg("cw_sumsq_t1"), py::arg("lambda_"),
          "One-step change of the quadratic queue functional");

    m.def(
        "perturb_measurement",
        [](const std::vector<std::int64_t>& counts, double sigma, std::uint64_t seed) {
            RngStream rng = RngStream::derive(seed, RngDomain::Measurement, 0);
            return perturb_measurement(counts, sigma, rng);
        },
        py::arg("counts"), py::arg("sigma"), py::arg("seed"),
        "Noisy crossing-queue measurement model");
}
