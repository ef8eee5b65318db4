#include "pqmp/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pqmp {

std::string to_string(ControllerKind k) {
    switch (k) {
        case ControllerKind::PQMP: return "pqmp";
        case ControllerKind::QMP: return "qmp";
        case ControllerKind::RuleBased: return "rule";
    }
    return "?";
}

ControllerKind controller_kind_from_string(const std::string& s) {
    if (s == "pqmp") return ControllerKind::PQMP;
    if (s == "qmp") return ControllerKind::QMP;
    if (s == "rule" || s == "rule_based") return ControllerKind::RuleBased;
    throw std::invalid_argument("unknown controller kind: " + s);
}

void ControllerConfig::validate() const {
    if (kind == ControllerKind::PQMP && !(lambda > 0.0 && lambda < 1.0)) {
        throw std::invalid_argument("pqmp requires 0 < lambda < 1");
    }
    if (kind == ControllerKind::RuleBased && !(tau_s > 0.0)) {
        throw std::invalid_argument("rule-based requires tau > 0");
    }
    if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
    if (update_period < 1) throw std::invalid_argument("update_period must be >= 1");
}

std::vector<double> perturb_measurement(std::span<const std::int64_t> true_counts, double sigma,
                                        RngStream& rng) {
    std::vector<double> out(true_counts.size());
    for (size_t i = 0; i < true_counts.size(); ++i) {
        const double x = static_cast<double>(true_counts[i]);
        out[i] = (sigma <= 0.0 || x == 0.0) ? x : std::max(0.0, rng.normal(x, sigma * x));
    }
    return out;
}

Observation observe(const TrafficState& state, const MovementCatalog& cat, double step_s,
                    double sigma, RngStream& measurement_rng) {
    Observation obs;
    obs.veh_q.resize(cat.n_movements());
    for (int m = 0; m < cat.n_movements(); ++m) {
        obs.veh_q[m] = static_cast<double>(state.veh_q[m]);
    }
    std::vector<std::int64_t> counts(cat.n_crosswalks());
    obs.cw_head_wait_s.resize(cat.n_crosswalks());
    for (int cw = 0; cw < cat.n_crosswalks(); ++cw) {
        counts[cw] = state.cw_count(cw);
        obs.cw_head_wait_s[cw] =
            state.cw_fifo[cw].empty()
                ? 0.0
                : static_cast<double>(state.clock - state.cw_fifo[cw].front()) * step_s;
    }
    obs.cw_q = perturb_measurement(counts, sigma, measurement_rng);
    return obs;
}

double vehicle_weight(int movement, const Observation& obs, const MovementCatalog& cat,
                      const RateModel& rates) {
    double w = obs.veh_q[movement];
    const int out_link = cat.movement(movement).out_link;
    for (int down : cat.movements_from_link(out_link)) {
        w -= obs.veh_q[down] * rates.veh_turn_share[down];
    }
    return w;
}

double ped_weight(int cw, const Observation& obs, const MovementCatalog& cat,
                  const RateModel& rates) {
    const int down = cat.next_crosswalk(cw);
    return obs.cw_q[cw] - obs.cw_q[down] * rates.crosswalk_continue_share(cat, cw);
}

double adjusted_saturation(int movement, const SignalPhase& phase, const Observation& obs,
                           const MovementCatalog& cat, const RateModel& rates) {
    const double mean = rates.veh_sat[movement];
    if (cat.movement(movement).turn != TurnKind::Right) return mean;
    double worst = 0.0;
    for (int cw : cat.conflicting_crosswalks(movement)) {
        if (!phase.serves_crosswalk_slot(cw % kCrosswalksPerIntersection)) continue;
        const double q = obs.cw_q[cw];
        if (q <= 0.0) continue;
        worst = std::max(worst, rates.cw_sat[cw] > 0.0 ? q / rates.cw_sat[cw] : 1.0);
    }
    return mean * (1.0 - std::min(1.0, worst));
}

double phase_pressure(const SignalPhase& phase, std::span<const double> veh_weight_slots,
                      std::span<const double> ped_weight_slots,
                      std::span<const double> veh_cap_slots, std::span<const double> cw_cap_slots,
                      double lambda) {
    double p = 0.0;
    for (int s = 0; s < kMovementsPerIntersection; ++s) {
        if (phase.serves_movement_slot(s)) p += veh_weight_slots[s] * veh_cap_slots[s];
    }
    double ped = 0.0;
    for (int s = 0; s < kCrosswalksPerIntersection; ++s) {
        if (phase.serves_crosswalk_slot(s)) ped += ped_weight_slots[s] * cw_cap_slots[s];
    }
    return p + lambda * ped;
}

namespace {

struct LocalSlots {
    double veh_w[kMovementsPerIntersection];
    double ped_w[kCrosswalksPerIntersection];
    double cw_cap[kCrosswalksPerIntersection];
};

LocalSlots local_slots(int intersection, const Observation& obs, const MovementCatalog& cat,
                       const RateModel& rates) {
    LocalSlots ls;
    for (int s = 0; s < kMovementsPerIntersection; ++s) {
        ls.veh_w[s] = vehicle_weight(intersection * kMovementsPerIntersection + s, obs, cat, rates);
    }
    for (int s = 0; s < kCrosswalksPerIntersection; ++s) {
        const int cw = intersection * kCrosswalksPerIntersection + s;
        ls.ped_w[s] = ped_weight(cw, obs, cat, rates);
        ls.cw_cap[s] = rates.cw_sat[cw];
    }
    return ls;
}

int argmax_phase(std::span<const int> candidates, std::span<const double> pressure) {
    int best = candidates[0];
    for (int c : candidates) {
        if (pressure[c] > pressure[best]) best = c;
    }
    return best;
}

}  // namespace

int pqmp_select(int intersection, const Observation& obs, const MovementCatalog& cat,
                const RateModel& rates, const std::vector<SignalPhase>& phases, double lambda) {
    const LocalSlots ls = local_slots(intersection, obs, cat, rates);
    int best = 0;
    double best_p = -std::numeric_limits<double>::infinity();
    for (const SignalPhase& ph : phases) {
        double cap[kMovementsPerIntersection];
        for (int s = 0; s < kMovementsPerIntersection; ++s) {
            cap[s] = adjusted_saturation(intersection * kMovementsPerIntersection + s, ph, obs,
                                         cat, rates);
        }
        const double p = phase_pressure(ph, ls.veh_w, ls.ped_w, cap, ls.cw_cap, lambda);
        if (p > best_p) {
            best_p = p;
            best = ph.index;
        }
    }
    return best;
}

namespace {

// Vehicle-family pressures on raw mean capacities, yield losses ignored.
std::vector<double> family_pressures(int intersection, const Observation& obs,
                                     const MovementCatalog& cat, const RateModel& rates,
                                     const std::vector<SignalPhase>& phases) {
    std::vector<double> pressure(phases.size(), -std::numeric_limits<double>::infinity());
    const LocalSlots ls = local_slots(intersection, obs, cat, rates);
    double raw_cap[kMovementsPerIntersection];
    for (int s = 0; s < kMovementsPerIntersection; ++s) {
        raw_cap[s] = rates.veh_sat[intersection * kMovementsPerIntersection + s];
    }
    const double zeros[kCrosswalksPerIntersection] = {};
    for (int f : vehicle_only_phases()) {
        pressure[f] = phase_pressure(phases[f], ls.veh_w, ls.ped_w, raw_cap, zeros, 0.0);
    }
    return pressure;
}

}  // namespace

int qmp_select(int intersection, const Observation& obs, const MovementCatalog& cat,
               const RateModel& rates, const std::vector<SignalPhase>& phases) {
    const auto pressure = family_pressures(intersection, obs, cat, rates, phases);
    const auto families = vehicle_only_phases();
    const int winner = argmax_phase(families, pressure);
    return both_crosswalks_variant(winner);
}

int rule_based_select(int intersection, const Observation& obs, const MovementCatalog& cat,
                      const RateModel& rates, const std::vector<SignalPhase>& phases,
                      double tau_s) {
    // A crossing side is expired when either of its directed queues has been
    // waiting at least tau.
    unsigned expired_mask = 0;
    bool ns_axis = false, ew_axis = false;
    for (Dir side : kAllDirs) {
        const int base = intersection * kCrosswalksPerIntersection + idx(side) * 2;
        if (obs.cw_head_wait_s[base] >= tau_s || obs.cw_head_wait_s[base + 1] >= tau_s) {
            expired_mask |= 1u << idx(side);
            if (side == Dir::E || side == Dir::W) {
                ns_axis = true;  // served together with NS through+right traffic
            } else {
                ew_axis = true;
            }
        }
    }
    if (expired_mask == 0) {
        const auto pressure = family_pressures(intersection, obs, cat, rates, phases);
        const auto families = vehicle_only_phases();
        return argmax_phase(families, pressure);
    }
    if (ns_axis && ew_axis) return exclusive_ped_phase();
    return tr_variant_serving(expired_mask);
}

int select_phase(const ControllerConfig& cfg, int intersection, const Observation& obs,
                 const MovementCatalog& cat, const RateModel& rates,
                 const std::vector<SignalPhase>& phases) {
    switch (cfg.kind) {
        case ControllerKind::PQMP:
            return pqmp_select(intersection, obs, cat, rates, phases, cfg.lambda);
        case ControllerKind::QMP:
            return qmp_select(intersection, obs, cat, rates, phases);
        case ControllerKind::RuleBased:
            return rule_based_select(intersection, obs, cat, rates, phases, cfg.tau_s);
    }
    throw std::logic_error("select_phase: bad controller kind");
}

}  // namespace pqmp
