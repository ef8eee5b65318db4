#include "pqmp/metrics.hpp"

#include <stdexcept>

namespace pqmp {

void DelayLedger::merge(const DelayLedger& other) {
    veh_delay_s += other.veh_delay_s;
    ped_delay_s += other.ped_delay_s;
    for (size_t r = 0; r < veh_delay_region_s.size(); ++r) {
        veh_delay_region_s[r] += other.veh_delay_region_s[r];
        ped_delay_region_s[r] += other.ped_delay_region_s[r];
    }
    veh_entered += other.veh_entered;
    veh_exited += other.veh_exited;
    ped_generated += other.ped_generated;
    ped_exited += other.ped_exited;
}

void accumulate_delay(DelayLedger& ledger, const TrafficState& post_state, const StepResult& step,
                      const MovementCatalog& cat, const RegionMap& regions, double step_s) {
    for (int m = 0; m < cat.n_movements(); ++m) {
        // Waiting through this step = pre-step queue minus departures, which
        // equals the post-step queue minus this step's arrivals.
        const std::int64_t waited = post_state.veh_q[m] - step.veh_in[m];
        if (waited <= 0) continue;
        const double inc = static_cast<double>(waited) * step_s;
        ledger.veh_delay_s += inc;
        const int region = regions.region_of_intersection[cat.movement(m).intersection];
        ledger.veh_delay_region_s[region] += inc;
    }
    const Network& net = cat.network();
    for (int cw = 0; cw < cat.n_crosswalks(); ++cw) {
        const std::int64_t waited = post_state.cw_count(cw) - step.cw_in[cw];
        if (waited <= 0) continue;
        const double inc = static_cast<double>(waited) * step_s;
        ledger.ped_delay_s += inc;
        const int region = regions.region_of_intersection[net.crosswalks[cw].intersection];
        ledger.ped_delay_region_s[region] += inc;
    }
    ledger.veh_entered += step.veh_entered;
    ledger.veh_exited += step.veh_exited;
    ledger.ped_generated += step.ped_generated;
    ledger.ped_exited += step.ped_exited;
}

double person_delay_h(const DelayLedger& ledger, double occupancy_pax_per_veh) {
    return occupancy_pax_per_veh * ledger.veh_delay_h() + ledger.ped_delay_h();
}

std::vector<DelayLedger> regional_split(const DelayLedger& ledger, const RegionMap& regions) {
    std::vector<DelayLedger> out(regions.n_regions(), DelayLedger::zero(regions));
    for (int r = 0; r < regions.n_regions(); ++r) {
        out[r].veh_delay_s = ledger.veh_delay_region_s[r];
        out[r].ped_delay_s = ledger.ped_delay_region_s[r];
        out[r].veh_delay_region_s[r] = ledger.veh_delay_region_s[r];
        out[r].ped_delay_region_s[r] = ledger.ped_delay_region_s[r];
    }
    return out;
}

}  // namespace pqmp
