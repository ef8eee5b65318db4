// Command-line front end: single runs, parameter sweeps, the stable-region
// analyzer and config validation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "pqmp/engine.hpp"

namespace {

using namespace pqmp;

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitRuntime = 4;

struct Overrides {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> controller;
    std::optional<double> lambda;
    std::optional<double> tau;
    std::optional<double> sigma;
    std::optional<double> demand;
    int parallel = 1;
};

void add_common(CLI::App* cmd, Overrides& o, bool with_controller) {
    cmd->add_option("--config", o.config_path, "Scenario config file (JSON)")->required();
    cmd->add_option("--out", o.out_dir, "Output directory");
    cmd->add_option("--parallel", o.parallel, "Worker threads for sweeps")
        ->check(CLI::PositiveNumber);
    if (with_controller) {
        cmd->add_option("--seed", o.seed, "Run seed (default: first configured seed)");
        cmd->add_option("--controller", o.controller, "pqmp | qmp | rule");
        cmd->add_option("--lambda", o.lambda, "Pedestrian pressure coefficient");
        cmd->add_option("--tau", o.tau, "Rule-based wait threshold, seconds");
        cmd->add_option("--sigma", o.sigma, "Crossing measurement noise ratio");
        cmd->add_option("--demand", o.demand, "Vehicle demand, veh/h per entry link");
    }
}

ScenarioConfig load_config(const Overrides& o) {
    ScenarioConfig cfg = ScenarioConfig::from_file(o.config_path);
    if (o.controller) cfg.controller_kind = controller_kind_from_string(*o.controller);
    if (o.lambda) cfg.lambdas = {*o.lambda};
    if (o.tau) cfg.taus_s = {*o.tau};
    if (o.sigma) cfg.sigmas = {*o.sigma};
    if (o.demand) cfg.demand_vph = {*o.demand};
    cfg.validate();
    return cfg;
}

RunParams run_params(const Scenario& s, const Overrides& o) {
    RunParams p;
    p.controller.kind = s.config.controller_kind;
    p.controller.lambda = s.config.lambdas.front();
    p.controller.tau_s = s.config.taus_s.front();
    p.controller.sigma = s.config.sigmas.front();
    p.controller.update_period = s.config.update_period;
    p.demand_vph = s.config.demand_vph.front();
    p.seed = o.seed.value_or(s.config.seeds.front());
    return p;
}

int do_run(const Overrides& o) {
    const ScenarioConfig cfg = load_config(o);
    const auto scenario = compile_scenario(cfg);
    const RunParams params = run_params(*scenario, o);
    const RunSummary run = run_once(*scenario, params);
    emit_report(*scenario, run, o.out_dir);
    std::cout << "run " << to_string(params.controller.kind) << " demand "
              << params.demand_vph << " veh/h seed " << params.seed << ": veh_delay_h "
              << run.ledger.veh_delay_h() << ", ped_delay_h " << run.ledger.ped_delay_h()
              << ", person_delay_h "
              << run.person_delay_hours(cfg.occupancy_pax_per_veh);
    if (run.classified) {
        std::cout << ", vehicles " << (run.verdicts.vehicles.stable ? "stable" : "unstable")
                  << ", pedestrians "
                  << (run.verdicts.pedestrians.stable ? "stable" : "unstable");
    }
    std::cout << "\nreport written to " << o.out_dir << std::endl;
    return 0;
}

int do_sweep(const Overrides& o) {
    const ScenarioConfig cfg = load_config(o);
    const auto scenario = compile_scenario(cfg);
    const SweepResult result = run_sweep(*scenario, o.parallel);
    emit_report(*scenario, result, o.out_dir);
    std::cout << "sweep: " << result.cells.size() << " cells x " << cfg.seeds.size()
              << " seeds = " << result.runs.size() << " runs\nreport written to " << o.out_dir
              << std::endl;
    return 0;
}

int do_feasibility(const Overrides& o) {
    const ScenarioConfig cfg = load_config(o);
    const auto scenario = compile_scenario(cfg);
    RateModel rates = scenario->rates;
    set_entry_demand_vph(scenario->catalog, rates, cfg.demand_vph.front());

    const SteadyFlows flows = solve_steady_flows(scenario->catalog, rates);
    const FeasibilityResult res =
        check_feasibility(flows, scenario->catalog, scenario->phases, rates);

    namespace fs = std::filesystem;
    fs::create_directories(o.out_dir);
    {
        std::ofstream out(fs::path(o.out_dir) / "steady_flows.csv", std::ios::binary);
        if (!out) throw std::runtime_error("io: cannot write steady_flows.csv");
        out << "kind,id,flow_per_step\n";
        char buf[40];
        auto emit = [&](const char* kind, size_t id, double v) {
            std::snprintf(buf, sizeof buf, "%.6g", v);
            out << kind << ',' << id << ',' << buf << '\n';
        };
        for (size_t m = 0; m < flows.veh.size(); ++m) emit("vehicle", m, flows.veh[m]);
        for (size_t c = 0; c < flows.cw.size(); ++c) emit("crosswalk", c, flows.cw[c]);
        for (size_t s = 0; s < flows.sw.size(); ++s) emit("sidewalk", s, flows.sw[s]);
    }
    {
        std::ofstream out(fs::path(o.out_dir) / "feasibility.csv", std::ios::binary);
        if (!out) throw std::runtime_error("io: cannot write feasibility.csv");
        out << "intersection,slack,binding_constraints\n";
        for (size_t i = 0; i < res.intersection_slack.size(); ++i) {
            out << i << ',' << res.intersection_slack[i] << ',';
            bool first = true;
            for (const auto& b : res.binding) {
                if (b.intersection != static_cast<int>(i)) continue;
                if (!first) out << ' ';
                out << (b.crosswalk ? "cw" : "veh") << b.id;
                first = false;
            }
            out << '\n';
        }
    }
    std::cout << "demand " << cfg.demand_vph.front() << " veh/h/entry: "
              << (res.feasible ? "FEASIBLE" : "INFEASIBLE") << " (slack " << res.slack
              << " per step)\nflow residual "
              << steady_flow_residual(flows, scenario->catalog, rates) << "\ntables written to "
              << o.out_dir << std::endl;
    return 0;
}

int do_validate(const Overrides& o) {
    const ScenarioConfig cfg = ScenarioConfig::from_file(o.config_path);
    std::cout << cfg.to_json_text() << std::endl;
    std::cerr << "config ok" << std::endl;
    return 0;
}

void print_error(const char* category, const std::string& message) {
    nlohmann::json j;
    j["error"] = {{"category", category}, {"message", message}};
    std::cerr << j.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mesoscopic grid-network signal control simulator"};
    app.require_subcommand(1);

    Overrides run_o, sweep_o, feas_o, validate_o;
    CLI::App* run_cmd = app.add_subcommand("run", "Simulate one scenario");
    add_common(run_cmd, run_o, true);
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run the full parameter grid");
    add_common(sweep_cmd, sweep_o, false);
    CLI::App* feas_cmd =
        app.add_subcommand("feasibility", "Steady flows and stable-region check");
    add_common(feas_cmd, feas_o, true);
    CLI::App* validate_cmd =
        app.add_subcommand("validate-config", "Parse, validate and echo a config");
    validate_cmd->add_option("--config", validate_o.config_path, "Scenario config file (JSON)")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return do_run(run_o);
        if (sweep_cmd->parsed()) return do_sweep(sweep_o);
        if (feas_cmd->parsed()) return do_feasibility(feas_o);
        if (validate_cmd->parsed()) return do_validate(validate_o);
    } catch (const std::invalid_argument& e) {
        print_error("config", e.what());
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        if (what.rfind("io:", 0) == 0) {
            print_error("io", what);
            return kExitIo;
        }
        print_error("runtime", what);
        return kExitRuntime;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return kExitRuntime;
    }
    return 0;
}
