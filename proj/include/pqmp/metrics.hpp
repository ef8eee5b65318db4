#pragma once

#include <string>
#include <vector>

#include "pqmp/dynamics.hpp"

namespace pqmp {

/// Intersection -> region label mapping for the delay breakdown.
struct RegionMap {
    std::vector<int> region_of_intersection;
    std::vector<std::string> labels;

    static RegionMap single(int n_intersections, std::string label = "all") {
        RegionMap rm;
        rm.region_of_intersection.assign(n_intersections, 0);
        rm.labels = {std::move(label)};
        return rm;
    }
    int n_regions() const { return static_cast<int>(labels.size()); }
};

/// Delay accounting. Every step, entities still queued after the step's
/// departures accrue one step of delay; the step in which an entity is served
/// is its free-flow traversal and costs nothing. Walkers never accrue delay.
struct DelayLedger {
    double veh_delay_s = 0.0;
    double ped_delay_s = 0.0;
    std::vector<double> veh_delay_region_s;
    std::vector<double> ped_delay_region_s;

    std::int64_t veh_entered = 0;
    std::int64_t veh_exited = 0;
    std::int64_t ped_generated = 0;
    std::int64_t ped_exited = 0;

    static DelayLedger zero(const RegionMap& regions) {
        DelayLedger l;
        l.veh_delay_region_s.assign(regions.n_regions(), 0.0);
        l.ped_delay_region_s.assign(regions.n_regions(), 0.0);
        return l;
    }

    double veh_delay_h() const { return veh_delay_s / 3600.0; }
    double ped_delay_h() const { return ped_delay_s / 3600.0; }
    double avg_veh_delay_min() const {
        return veh_entered > 0 ? veh_delay_s / 60.0 / static_cast<double>(veh_entered) : 0.0;
    }
    double avg_ped_delay_min() const {
        return ped_generated > 0 ? ped_delay_s / 60.0 / static_cast<double>(ped_generated) : 0.0;
    }

    void merge(const DelayLedger& other);
};

/// Adds one step's delay. Call after advance_step: with post-step queues and
/// the step's arrivals in hand, waiting entities are queue - arrivals.
void accumulate_delay(DelayLedger& ledger, const TrafficState& post_state, const StepResult& step,
                      const MovementCatalog& cat, const RegionMap& regions, double step_s);

/// Total person delay: vehicle hours scaled by average occupancy plus
/// pedestrian hours.
double person_delay_h(const DelayLedger& ledger, double occupancy_pax_per_veh);

/// Per-region view of a ledger, one ledger per label; delays split by the
/// region of the intersection where the queue sits, counts left on the
/// network-wide totals only.
std::vector<DelayLedger> regional_split(const DelayLedger& ledger, const RegionMap& regions);

}  // namespace pqmp
