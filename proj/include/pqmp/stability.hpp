#pragma once

#include <limits>
#include <span>
#include <vector>

#include "pqmp/phases.hpp"
#include "pqmp/rates.hpp"
#include "pqmp/state.hpp"

namespace pqmp {

/// Mean per-step flow on every movement under the configured demand and
/// turning ratios, the fixed point of the conservation equations.
struct SteadyFlows {
    std::vector<double> veh;  // per vehicle movement
    std::vector<double> cw;   // per crosswalk movement
    std::vector<double> sw;   // per sidewalk movement (net of exits)
};

/// Solves the steady flows by direct linear solve of the conservation
/// systems. Throws if routing traps flow in a cycle with no way out (the
/// message names trapped movements) or if exits exceed arrivals somewhere.
SteadyFlows solve_steady_flows(const MovementCatalog& cat, const RateModel& rates);

/// Largest relative violation of the conservation identities by `flows`;
/// independent recomputation used by tests and reports.
double steady_flow_residual(const SteadyFlows& flows, const MovementCatalog& cat,
                            const RateModel& rates);

struct FeasibilityOptions {
    /// Reduce right-turn capacity in phases that serve a conflicting crossing
    /// by the stationary queue-clearing fraction min(1, f_pc / c_p). This is
    /// an inner approximation of the true region. When off, capacities are
    /// the raw means unless `fixed_veh_cap` supplies adjusted values.
    bool ped_adjustment = true;
    std::vector<double> fixed_veh_cap;  // per movement, optional
    /// Sidewalk capacity screen (per step); sidewalks cannot queue, so this
    /// is reported but does not gate the verdict.
    double sidewalk_capacity = std::numeric_limits<double>::infinity();
};

struct BindingConstraint {
    int intersection = -1;
    bool crosswalk = false;
    int id = -1;  // movement or crosswalk id
    double slack = 0.0;
};

struct FeasibilityResult {
    bool feasible = false;
    /// Max-min slack over the whole network: the worst intersection's best
    /// achievable margin of service rate over demand (negative when
    /// infeasible).
    double slack = 0.0;
    std::vector<double> intersection_slack;
    std::vector<std::vector<double>> pi;  // per intersection, one weight per phase
    std::vector<BindingConstraint> binding;
    bool sidewalk_ok = true;
    std::vector<int> sidewalk_violations;
};

/// Decides whether the demand behind `flows` can be served by any convex
/// combination of phases, one small LP per intersection maximizing the
/// minimum capacity-minus-flow slack.
FeasibilityResult check_feasibility(const SteadyFlows& flows, const MovementCatalog& cat,
                                    const std::vector<SignalPhase>& phases,
                                    const RateModel& rates, const FeasibilityOptions& opt = {});

struct SeriesVerdict {
    bool stable = true;
    double slope_per_step = 0.0;
    double mean_level = 0.0;
    double threshold = 0.0;
};

/// Declares a loading-period series unstable when the least-squares slope of
/// its second half exceeds theta * mean / length, i.e. when extrapolated
/// growth over the horizon is a significant fraction of the level.
SeriesVerdict classify_series(std::span<const double> series, double theta = 0.5);

struct RunClassification {
    SeriesVerdict vehicles;
    SeriesVerdict pedestrians;
};

RunClassification classify_run(std::span<const double> veh_series,
                               std::span<const double> ped_series, double theta = 0.5);

/// One-step change of the quadratic queue functional
/// |Xv|^2 + lambda |Xpc|^2; negative-trending when the controller is keeping
/// queues bounded.
double lyapunov_drift(double veh_sumsq_t, double veh_sumsq_t1, double cw_sumsq_t,
                      double cw_sumsq_t1, double lambda);
double lyapunov_drift(const TrafficState& at_t, const TrafficState& at_t1, double lambda);

}  // namespace pqmp
