#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "pqmp/engine.hpp"

using namespace pqmp;

namespace {

ScenarioConfig small_config() {
    ScenarioConfig c;
    c.rows = 2;
    c.cols = 2;
    c.loading_s = 1200;   // 60 steps
    c.cooldown_s = 1200;  // enough to drain a light load
    c.demand_vph = {200.0};
    c.od_probability_high = 0.002;
    c.od_probability_low = 0.001;
    c.sat_cov = 0.1;
    c.lambdas = {0.001};
    c.taus_s = {80.0};
    c.sigmas = {0.0};
    c.seeds = {1, 2};
    return c;
}

RunParams params_for(const Scenario& s, ControllerKind kind, std::uint64_t seed) {
    RunParams p;
    p.controller.kind = kind;
    p.controller.lambda = s.config.lambdas.front();
    p.controller.tau_s = s.config.taus_s.front();
    p.demand_vph = s.config.demand_vph.front();
    p.seed = seed;
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("zero demand produces an empty run") {
    ScenarioConfig c = small_config();
    c.demand_vph = {0.0};
    c.od_probability_high = 0.0;
    c.od_probability_low = 0.0;
    const auto scenario = compile_scenario(c);
    const RunSummary run =
        run_once(*scenario, params_for(*scenario, ControllerKind::PQMP, 1));
    for (double v : run.veh_series) CHECK(v == 0.0);
    for (double v : run.ped_series) CHECK(v == 0.0);
    CHECK(run.ledger.veh_delay_s == 0.0);
    CHECK(run.ledger.ped_delay_s == 0.0);
    CHECK(run.classified);
    CHECK(run.verdicts.vehicles.stable);
}

TEST_CASE("identical config and seed reproduce the summary exactly") {
    const auto scenario = compile_scenario(small_config());
    const RunParams p = params_for(*scenario, ControllerKind::PQMP, 7);
    const RunSummary a = run_once(*scenario, p);
    const RunSummary b = run_once(*scenario, p);
    CHECK(a.veh_series == b.veh_series);
    CHECK(a.ped_series == b.ped_series);
    CHECK(a.ledger.veh_delay_s == b.ledger.veh_delay_s);
    CHECK(a.ledger.ped_delay_s == b.ledger.ped_delay_s);
    CHECK(a.phase_trace == b.phase_trace);
    CHECK(a.ledger.veh_entered == b.ledger.veh_entered);

    const RunSummary c = run_once(*scenario, params_for(*scenario, ControllerKind::PQMP, 8));
    CHECK(a.veh_series != c.veh_series);
}

TEST_CASE("a light run drains during cool-down and conserves entities") {
    ScenarioConfig c = small_config();
    c.cooldown_s = 3600;  // walking a trip across the grid takes ~20 minutes
    const auto scenario = compile_scenario(c);
    for (ControllerKind kind :
         {ControllerKind::PQMP, ControllerKind::QMP, ControllerKind::RuleBased}) {
        const RunSummary run = run_once(*scenario, params_for(*scenario, kind, 3));
        CHECK(run.veh_series.back() == 0.0);
        CHECK(run.ledger.veh_entered == run.ledger.veh_exited);
        CHECK(run.ledger.veh_entered > 0);
        CHECK(run.ledger.ped_generated > 0);
        if (kind == ControllerKind::QMP) {
            // The vehicle-only baseline ties at zero pressure once traffic
            // drains and then repeats its lowest-index phase, which strands
            // the last arrivals on the crossings that phase never serves.
            const auto remaining = run.ledger.ped_generated - run.ledger.ped_exited;
            CHECK(remaining == static_cast<std::int64_t>(run.ped_series.back()));
            CHECK(remaining < run.ledger.ped_generated / 4);
        } else {
            CHECK(run.ped_series.back() == 0.0);
            CHECK(run.ledger.ped_generated == run.ledger.ped_exited);
        }
    }
}

TEST_CASE("series length equals the horizon in steps") {
    const auto scenario = compile_scenario(small_config());
    const RunSummary run =
        run_once(*scenario, params_for(*scenario, ControllerKind::QMP, 1));
    CHECK(run.veh_series.size() == static_cast<size_t>(scenario->config.total_steps()));
    CHECK(run.veh_sumsq.size() == run.veh_series.size() + 1);
    CHECK(run.phase_trace.size() == run.veh_series.size());
}

TEST_CASE("sweep enumerates coefficient, threshold and baseline cells") {
    ScenarioConfig c = small_config();
    c.lambdas = {0.001, 0.01};
    c.taus_s = {40.0, 80.0};
    c.seeds = {1, 2, 3};
    c.loading_s = 600;
    c.cooldown_s = 600;
    const auto scenario = compile_scenario(c);
    const SweepResult result = run_sweep(*scenario, /*parallel=*/2);
    // (2 lambdas + 2 taus + 1 baseline) x 1 demand.
    REQUIRE(result.cells.size() == 5);
    REQUIRE(result.runs.size() == 15);
    REQUIRE(result.aggregates.size() == 5);
    for (const auto& agg : result.aggregates) CHECK(agg.seed_count == 3);

    // Aggregates are exact seed means of the runs.
    const int n_seeds = 3;
    for (size_t cell = 0; cell < result.cells.size(); ++cell) {
        double mean = 0.0;
        for (int s = 0; s < n_seeds; ++s) {
            mean += result.runs[cell * n_seeds + s].ledger.veh_delay_h();
        }
        mean /= n_seeds;
        CHECK(result.aggregates[cell].veh_delay_h == doctest::Approx(mean));
    }
}

TEST_CASE("parallel and serial sweeps agree") {
    ScenarioConfig c = small_config();
    c.loading_s = 600;
    c.cooldown_s = 600;
    c.seeds = {1, 2};
    const auto scenario = compile_scenario(c);
    const SweepResult serial = run_sweep(*scenario, 1);
    const SweepResult parallel = run_sweep(*scenario, 4);
    REQUIRE(serial.runs.size() == parallel.runs.size());
    for (size_t i = 0; i < serial.runs.size(); ++i) {
        CHECK(serial.runs[i].veh_series == parallel.runs[i].veh_series);
    }
}

TEST_CASE("reports are written and byte-stable") {
    namespace fs = std::filesystem;
    const auto scenario = compile_scenario(small_config());
    const RunSummary run =
        run_once(*scenario, params_for(*scenario, ControllerKind::PQMP, 1));

    const fs::path dir1 = fs::temp_directory_path() / "pqmp_report_a";
    const fs::path dir2 = fs::temp_directory_path() / "pqmp_report_b";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    emit_report(*scenario, run, dir1.string());
    emit_report(*scenario, run, dir2.string());

    REQUIRE(fs::exists(dir1 / "aggregate.csv"));
    REQUIRE(fs::exists(dir1 / "reductions.csv"));
    REQUIRE(fs::exists(dir1 / "manifest.json"));
    int series_files = 0;
    for (const auto& entry : fs::directory_iterator(dir1)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("series_", 0) == 0) {
            ++series_files;
            CHECK(slurp(entry.path()) == slurp(dir2 / name));
        }
        if (name == "aggregate.csv") CHECK(slurp(entry.path()) == slurp(dir2 / name));
    }
    CHECK(series_files == 1);

    const std::string agg = slurp(dir1 / "aggregate.csv");
    CHECK(agg.find("controller,param,demand_vph,seed_count,veh_delay_h,ped_delay_h,"
                   "person_delay_h,veh_stable,ped_stable") == 0);
    CHECK(agg.find("veh_delay_h_green") != std::string::npos);

    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("an empty sweep yields header-only tables") {
    namespace fs = std::filesystem;
    const auto scenario = compile_scenario(small_config());
    const fs::path dir = fs::temp_directory_path() / "pqmp_report_empty";
    fs::remove_all(dir);
    emit_report(*scenario, SweepResult{}, dir.string());
    const std::string agg = slurp(dir / "aggregate.csv");
    CHECK(agg.rfind('\n') == agg.size() - 1);
    CHECK(agg.find("controller,") == 0);
    CHECK(std::count(agg.begin(), agg.end(), '\n') == 1);
    fs::remove_all(dir);
}
