#pragma once

#include <span>

#include "pqmp/phases.hpp"
#include "pqmp/rates.hpp"
#include "pqmp/rng.hpp"
#include "pqmp/state.hpp"

namespace pqmp {

/// Realized saturation flows for one step, in whole entities per step after
/// any switching-loss scaling. Service never exceeds these.
struct StepDraws {
    std::vector<std::int64_t> veh_cap;  // per movement
    std::vector<std::int64_t> cw_cap;   // per crosswalk
};

/// Flow bookkeeping for one step, used by metrics, flow measurement and the
/// conservation identities.
struct StepResult {
    std::vector<std::int64_t> veh_out;  // served per movement
    std::vector<std::int64_t> veh_in;   // arrivals per movement (routed + demand)
    std::vector<std::int64_t> cw_out;   // served per crosswalk
    std::vector<std::int64_t> cw_in;    // arrivals per crosswalk
    std::vector<std::int64_t> sw_arrived;  // walkers reaching the head per sidewalk

    std::int64_t veh_entered = 0;
    std::int64_t veh_exited = 0;
    std::int64_t ped_generated = 0;
    std::int64_t ped_exited = 0;

    void reset(const MovementCatalog& cat) {
        veh_out.assign(cat.n_movements(), 0);
        veh_in.assign(cat.n_movements(), 0);
        cw_out.assign(cat.n_crosswalks(), 0);
        cw_in.assign(cat.n_crosswalks(), 0);
        sw_arrived.assign(cat.n_sidewalks(), 0);
        veh_entered = veh_exited = ped_generated = ped_exited = 0;
    }
};

/// One dynamics stream per intersection plus one scenario-level stream.
class DynamicsRng {
  public:
    DynamicsRng(std::uint64_t run_seed, int n_intersections);
    RngStream& at(int intersection) { return streams_[intersection]; }

  private:
    std::vector<RngStream> streams_;
};

/// Indices of walkers within one step's walking reach of the downstream node
/// (these arrive during the step). Pure; removal is the caller's job.
std::vector<int> psi_arrivals(std::span<const Walker> walkers, double reach_m);

/// Draws this step's saturation flows: truncated-normal around the means,
/// clamped to [0, 2 * mean], floored to whole entities. At intersections in
/// `switched`, capacities are scaled by (step - lost_time) / step first.
StepDraws realize_saturation(const MovementCatalog& cat, const RateModel& rates,
                             std::span<const char> switched, double lost_time_s, double step_s,
                             DynamicsRng& rng);

/// Advances the whole network one synchronous step under the given phase
/// selection (one phase index per intersection). All service decisions read
/// the pre-step state; transfers land afterwards. `demand_active` gates both
/// vehicle demand and pedestrian generation (cool-down sets it false).
StepResult advance_step(TrafficState& state, const MovementCatalog& cat,
                        const std::vector<SignalPhase>& phases, std::span<const int> chosen,
                        const StepDraws& draws, const RateModel& rates, bool demand_active,
                        DynamicsRng& rng);

/// Right-turn capacity left over after yielding to served conflicting
/// crossings, given the conflicting queue sizes and crossing capacities
/// (the fraction of the step consumed by the worst conflicting queue is
/// unavailable to the turn).
double yield_adjusted_capacity(double veh_cap, std::span<const double> conflict_queue,
                               std::span<const double> conflict_cap);

}  // namespace pqmp
