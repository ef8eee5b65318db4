#pragma once

#include <span>
#include <string>
#include <vector>

#include "pqmp/phases.hpp"
#include "pqmp/rates.hpp"
#include "pqmp/rng.hpp"
#include "pqmp/state.hpp"

namespace pqmp {

enum class ControllerKind { PQMP, QMP, RuleBased };

std::string to_string(ControllerKind k);
ControllerKind controller_kind_from_string(const std::string& s);

struct ControllerConfig {
    ControllerKind kind = ControllerKind::PQMP;
    double lambda = 0.001;  // pedestrian pressure coefficient, in (0,1)
    double tau_s = 80.0;    // head-of-queue wait threshold, seconds
    double sigma = 0.0;     // measurement noise ratio for crossing queues
    int update_period = 1;  // steps between decisions

    void validate() const;
};

/// What a controller sees at a decision instant: exact vehicle queues,
/// possibly noised crossing queues and the waiting time of each crossing
/// queue's head. Weights and pressures are pure functions of this plus the
/// mean rates.
struct Observation {
    std::vector<double> veh_q;
    std::vector<double> cw_q;
    std::vector<double> cw_head_wait_s;
};

/// Snapshot of the true state; sigma > 0 replaces each crossing count x by a
/// draw from Normal(x, sigma * x) clamped at zero.
Observation observe(const TrafficState& state, const MovementCatalog& cat, double step_s,
                    double sigma, RngStream& measurement_rng);

/// Measurement model in isolation (sigma = 0 is the identity).
std::vector<double> perturb_measurement(std::span<const std::int64_t> true_counts, double sigma,
                                        RngStream& rng);

/// Queue of the movement minus the turning-ratio-weighted downstream queues
/// (zero downstream term when the movement leaves through an exit link).
double vehicle_weight(int movement, const Observation& obs, const MovementCatalog& cat,
                      const RateModel& rates);

/// Crossing queue minus its unique downstream crossing queue scaled by the
/// continuation share.
double ped_weight(int cw, const Observation& obs, const MovementCatalog& cat,
                  const RateModel& rates);

/// Mean right-turn capacity after yielding to crossings served by `phase`,
/// using observed crossing queues; the plain mean for anything else.
double adjusted_saturation(int movement, const SignalPhase& phase, const Observation& obs,
                           const MovementCatalog& cat, const RateModel& rates);

/// Pressure of one phase from intersection-local weight and capacity slots:
/// sum of vehicle weight x adjusted capacity over served movements plus
/// lambda times the crossing term. Bilinear in (weights, capacities).
double phase_pressure(const SignalPhase& phase, std::span<const double> veh_weight_slots,
                      std::span<const double> ped_weight_slots,
                      std::span<const double> veh_cap_slots, std::span<const double> cw_cap_slots,
                      double lambda);

/// Max-pressure selection over the full phase set, pedestrian queues
/// included. Ties break to the lowest phase index.
int pqmp_select(int intersection, const Observation& obs, const MovementCatalog& cat,
                const RateModel& rates, const std::vector<SignalPhase>& phases, double lambda);

/// Vehicle-only max pressure: scores the four vehicle families on raw means
/// (yield losses ignored), then serves both parallel crossings whenever a
/// through+right family wins. Never picks the all-pedestrian phase.
int qmp_select(int intersection, const Observation& obs, const MovementCatalog& cat,
               const RateModel& rates, const std::vector<SignalPhase>& phases);

/// Threshold policy: vehicle-only max pressure until some crossing's head
/// wait reaches tau, then the phase serving exactly the expired crossing
/// sides (the all-pedestrian phase when both axes have expired sides).
int rule_based_select(int intersection, const Observation& obs, const MovementCatalog& cat,
                      const RateModel& rates, const std::vector<SignalPhase>& phases,
                      double tau_s);

int select_phase(const ControllerConfig& cfg, int intersection, const Observation& obs,
                 const MovementCatalog& cat, const RateModel& rates,
                 const std::vector<SignalPhase>& phases);

}  // namespace pqmp
