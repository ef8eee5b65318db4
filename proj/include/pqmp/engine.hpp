#pragma once

#include <optional>
#include <string>

#include "pqmp/scenario.hpp"

namespace pqmp {

/// Everything that varies between runs of one compiled scenario.
struct RunParams {
    ControllerConfig controller;
    double demand_vph = 0.0;
    std::uint64_t seed = 0;
};

struct RunOptions {
    bool record_trace = true;
    /// Accumulate per-movement arrival rates over the loading period
    /// (throughput measurement for flow validation).
    bool record_flows = false;
    /// Verify nonnegativity and the conservation identities every n steps
    /// (0 disables).
    int check_every = 1;
};

struct RunSummary {
    RunParams params;
    // Network totals after each step; length = horizon / step.
    std::vector<double> veh_series;
    std::vector<double> ped_series;
    // Sum of squared queues including the initial state (length steps + 1).
    std::vector<double> veh_sumsq;
    std::vector<double> cw_sumsq;
    DelayLedger ledger;
    bool classified = false;
    RunClassification verdicts;
    std::vector<std::vector<std::uint8_t>> phase_trace;  // [step][intersection]
    double wall_ms = 0.0;

    std::vector<double> veh_arrival_rate;  // per movement, loading average
    std::vector<double> cw_arrival_rate;
    std::vector<double> sw_arrival_rate;

    double person_delay_hours(double occupancy) const {
        return person_delay_h(ledger, occupancy);
    }
};

RunSummary run_once(const Scenario& scenario, const RunParams& params,
                    const RunOptions& options = {});

struct SweepCell {
    ControllerConfig controller;
    double demand_vph = 0.0;
    std::string label() const;  // e.g. pqmp_l0.001, rule_t80, qmp
};

struct CellAggregate {
    SweepCell cell;
    int seed_count = 0;
    double veh_delay_h = 0.0;  // seed means
    double ped_delay_h = 0.0;
    double person_delay_h = 0.0;
    double veh_stable_fraction = 0.0;
    double ped_stable_fraction = 0.0;
    std::vector<double> veh_delay_region_h;
    std::vector<double> ped_delay_region_h;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<RunSummary> runs;  // cell-major, seeds inner
    std::vector<CellAggregate> aggregates;
};

/// Expands the scenario's sweep lists into cells (every pedestrian-aware
/// coefficient and threshold plus the vehicle-only baseline, at every demand
/// level), runs all (cell, seed) combinations and aggregates seed means.
/// `parallel` > 1 distributes runs over worker threads; results are ordered
/// deterministically regardless.
SweepResult run_sweep(const Scenario& scenario, int parallel = 1,
                      const RunOptions& options = {});

/// Recomputes seed-mean aggregates from cells and runs (cell-major order).
void compute_aggregates(SweepResult& result, const Scenario& scenario);

/// Writes per-run series and decision traces, the aggregate table, the
/// baseline-comparison table and a manifest into `out_dir`.
void emit_report(const Scenario& scenario, const SweepResult& result,
                 const std::string& out_dir);

/// Report for a single run (same file set, one run).
void emit_report(const Scenario& scenario, const RunSummary& run, const std::string& out_dir);

}  // namespace pqmp
