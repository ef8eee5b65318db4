#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pqmp/controllers.hpp"
#include "pqmp/metrics.hpp"
#include "pqmp/rates.hpp"
#include "pqmp/stability.hpp"

namespace pqmp {

/// Scenario description as read from the config file. Field defaults are the
/// reference setup: a 5x5 grid of 300 m links, 20 s steps, one hour of
/// loading plus one hour of cool-down, four demand levels and the standard
/// coefficient sweeps.
struct ScenarioConfig {
    int rows = 5;
    int cols = 5;
    double link_length_m = 300.0;
    double veh_speed_mps = 15.0;
    double ped_speed_mps = 1.3;

    double loading_s = 3600.0;
    double cooldown_s = 3600.0;

    std::vector<double> demand_vph = {400.0, 500.0, 600.0, 700.0};

    // Left / through / right split, identical at every approach.
    std::array<double, 3> turn_shares = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

    /// High-pedestrian-demand intersections ("green"); everything else is
    /// "blue". Empty means the grid's left half (col < (cols + 1) / 2).
    std::vector<int> high_region;
    bool high_region_is_default = true;
    /// Per-step probability that a directed-sidewalk origin generates a trip
    /// to a given destination sidewalk.
    double od_probability_high = 0.6;  // both endpoints in the high region
    double od_probability_low = 0.3;

    double veh_sat_per_step = 10.0;
    double cw_sat_per_step = 25.0;
    double sat_cov = 0.1;

    ControllerKind controller_kind = ControllerKind::PQMP;
    std::vector<double> lambdas = {0.0005, 0.001, 0.002, 0.004, 0.006, 0.008, 0.01, 0.05, 0.1};
    std::vector<double> taus_s = {20.0, 40.0, 60.0, 80.0, 100.0};
    std::vector<double> sigmas = {0.0};
    int update_period = 1;

    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    double lost_time_s = 4.0;
    double occupancy_pax_per_veh = 1.3;

    void validate() const;
    double step_s() const { return link_length_m / veh_speed_mps; }
    int loading_steps() const { return static_cast<int>(loading_s / step_s() + 0.5); }
    int total_steps() const {
        return static_cast<int>((loading_s + cooldown_s) / step_s() + 0.5);
    }

    /// Strict parse: unknown keys anywhere are errors.
    static ScenarioConfig from_json_text(const std::string& text);
    static ScenarioConfig from_file(const std::string& path);
    std::string to_json_text() const;   // canonical (sorted keys)
    std::uint64_t config_hash() const;  // FNV-1a over the canonical text
};

struct PedOdSummary {
    int centroids = 0;
    std::int64_t pairs_total = 0;
    std::int64_t pairs_unreachable = 0;
    double total_generation_per_step = 0.0;
    /// Per-sidewalk rate of trips destined to end there (realized through the
    /// routing rows' exit shares, not the per-step removal channel).
    std::vector<double> destined_exit_rate;
};

/// Fully compiled scenario: network, catalog, phase set, rates with the
/// pedestrian origin-destination table folded into per-sidewalk generation /
/// exit rates and stationary corner routing shares. Not copyable (the
/// catalog references the network).
struct Scenario {
    ScenarioConfig config;
    Network net;
    MovementCatalog catalog;
    std::vector<SignalPhase> phases;
    RateModel rates;  // entry demand left at the first configured level
    RegionMap regions;
    PedOdSummary od;

    explicit Scenario(ScenarioConfig cfg);
    Scenario(const Scenario&) = delete;
    Scenario& operator=(const Scenario&) = delete;
};

std::unique_ptr<Scenario> compile_scenario(ScenarioConfig cfg);

/// Compiles the origin-destination table onto the sidewalk graph: every
/// directed sidewalk is a centroid; each ordered pair contributes its
/// per-step probability along the shortest admissible walking path
/// (no immediate crosswalk or sidewalk reversals). Writes generation and
/// exit rates plus flow-weighted routing shares into `rates`.
PedOdSummary compile_ped_od(const MovementCatalog& cat,
                            const std::vector<bool>& sidewalk_in_high_region, double p_high,
                            double p_low, RateModel& rates);

}  // namespace pqmp
