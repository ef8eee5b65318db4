#include "pqmp/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace pqmp {
namespace {

std::int64_t floor_count(double v) {
    return static_cast<std::int64_t>(std::floor(v + 1e-9));
}

// Anchor intersection owning a sidewalk's random draws.
int sidewalk_anchor(const Network& net, int sw) {
    const Sidewalk& s = net.sidewalks[sw];
    if (net.is_corner(s.to_node)) return net.corner_intersection(s.to_node);
    return net.corner_intersection(s.from_node);
}

// Draws the transition taken at the head of `edge`; kLeaveNetwork exits.
int sample_transition(const MovementCatalog& cat, const RateModel& rates, int edge,
                      RngStream& rng) {
    const PedRoutingRow& row = rates.ped_routing[edge];
    const auto& options = cat.ped_transitions(edge);
    if (options.empty()) return kLeaveNetwork;
    double u = rng.uniform01();
    if (u < row.exit_share) return kLeaveNetwork;
    u -= row.exit_share;
    for (size_t i = 0; i + 1 < options.size(); ++i) {
        u -= row.share[i];
        if (u < 0.0) return options[i];
    }
    return options.back();
}

}  // namespace

DynamicsRng::DynamicsRng(std::uint64_t run_seed, int n_intersections) {
    streams_.reserve(n_intersections);
    for (int i = 0; i < n_intersections; ++i) {
        streams_.push_back(RngStream::derive(run_seed, RngDomain::Dynamics, i));
    }
}

std::vector<int> psi_arrivals(std::span<const Walker> walkers, double reach_m) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(walkers.size()); ++i) {
        if (walkers[i].dist_m <= reach_m) out.push_back(i);
    }
    return out;
}

double yield_adjusted_capacity(double veh_cap, std::span<const double> conflict_queue,
                               std::span<const double> conflict_cap) {
    double worst = 0.0;
    for (size_t i = 0; i < conflict_queue.size(); ++i) {
        if (conflict_queue[i] <= 0.0) continue;
        const double frac =
            conflict_cap[i] > 0.0 ? conflict_queue[i] / conflict_cap[i] : 1.0;
        worst = std::max(worst, frac);
    }
    return veh_cap * (1.0 - std::min(1.0, worst));
}

StepDraws realize_saturation(const MovementCatalog& cat, const RateModel& rates,
                             std::span<const char> switched, double lost_time_s, double step_s,
                             DynamicsRng& rng) {
    StepDraws d;
    d.veh_cap.resize(cat.n_movements());
    d.cw_cap.resize(cat.n_crosswalks());
    const double switch_factor = std::max(0.0, (step_s - lost_time_s) / step_s);

    auto draw = [&](double mean, RngStream& r) {
        if (mean <= 0.0) return 0.0;
        if (rates.sat_cov <= 0.0) return mean;
        return std::clamp(r.normal(mean, rates.sat_cov * mean), 0.0, 2.0 * mean);
    };

    for (int m = 0; m < cat.n_movements(); ++m) {
        const int inter = cat.movement(m).intersection;
        double v = draw(rates.veh_sat[m], rng.at(inter));
        if (switched[inter]) v *= switch_factor;
        d.veh_cap[m] = floor_count(v);
    }
    for (int cw = 0; cw < cat.n_crosswalks(); ++cw) {
        const int inter = cat.network().crosswalks[cw].intersection;
        double v = draw(rates.cw_sat[cw], rng.at(inter));
        if (switched[inter]) v *= switch_factor;
        d.cw_cap[cw] = floor_count(v);
    }
    return d;
}

StepResult advance_step(TrafficState& state, const MovementCatalog& cat,
                        const std::vector<SignalPhase>& phases, std::span<const int> chosen,
                        const StepDraws& draws, const RateModel& rates, bool demand_active,
                        DynamicsRng& rng) {
    const Network& net = cat.network();
    StepResult res;
    res.reset(cat);
    const std::int32_t next_t = state.clock + 1;

    // Service decisions, all against the pre-step state. Right turns sharing
    // their phase with a conflicting served crossing lose the fraction of the
    // step the crossing queue needs.
    for (int m = 0; m < cat.n_movements(); ++m) {
        const Movement& mv = cat.movement(m);
        const SignalPhase& ph = phases[chosen[mv.intersection]];
        if (!ph.serves_movement_slot(m % kMovementsPerIntersection)) continue;
        double cap = static_cast<double>(draws.veh_cap[m]);
        if (mv.turn == TurnKind::Right) {
            double queues[2], caps[2];
            size_t n = 0;
            for (int cw : cat.conflicting_crosswalks(m)) {
                if (!ph.serves_crosswalk_slot(cw % kCrosswalksPerIntersection)) continue;
                queues[n] = static_cast<double>(state.cw_count(cw));
                caps[n] = static_cast<double>(draws.cw_cap[cw]);
                ++n;
            }
            cap = yield_adjusted_capacity(cap, {queues, n}, {caps, n});
        }
        res.veh_out[m] = std::min(floor_count(cap), state.veh_q[m]);
    }
    for (int cw = 0; cw < cat.n_crosswalks(); ++cw) {
        const int inter = net.crosswalks[cw].intersection;
        const SignalPhase& ph = phases[chosen[inter]];
        if (!ph.serves_crosswalk_slot(cw % kCrosswalksPerIntersection)) continue;
        res.cw_out[cw] = std::min(draws.cw_cap[cw], state.cw_count(cw));
    }

    // Vehicle transfers: served vehicles either leave through an exit link or
    // draw their next turn and queue on the downstream movement.
    for (int m = 0; m < cat.n_movements(); ++m) {
        const std::int64_t y = res.veh_out[m];
        if (y == 0) continue;
        const Movement& mv = cat.movement(m);
        state.veh_q[m] -= y;
        if (net.links[mv.out_link].kind == LinkKind::Exit) {
            res.veh_exited += y;
            continue;
        }
        const auto& options = cat.movements_from_link(mv.out_link);
        double probs[3];
        for (size_t i = 0; i < options.size(); ++i) probs[i] = rates.veh_turn_share[options[i]];
        RngStream& r = rng.at(mv.intersection);
        for (std::int64_t k = 0; k < y; ++k) {
            res.veh_in[options[r.categorical({probs, options.size()})]] += 1;
        }
    }
    if (demand_active) {
        for (int m = 0; m < cat.n_movements(); ++m) {
            if (rates.veh_demand[m] <= 0.0) continue;
            const std::int64_t k = rng.at(cat.movement(m).intersection).poisson(rates.veh_demand[m]);
            res.veh_in[m] += k;
            res.veh_entered += k;
        }
    }
    for (int m = 0; m < cat.n_movements(); ++m) state.veh_q[m] += res.veh_in[m];

    // Crosswalk service: FIFO departures, each drawing its onward transition.
    std::vector<std::int64_t> cw_push(cat.n_crosswalks(), 0);
    std::vector<std::int64_t> sw_join(cat.n_sidewalks(), 0);
    for (int cw = 0; cw < cat.n_crosswalks(); ++cw) {
        std::int64_t y = res.cw_out[cw];
        if (y == 0) continue;
        RngStream& r = rng.at(net.crosswalks[cw].intersection);
        auto& fifo = state.cw_fifo[cw];
        for (std::int64_t k = 0; k < y; ++k) {
            fifo.pop_front();
            const int next = sample_transition(cat, rates, cw, r);
            if (next == kLeaveNetwork) {
                res.ped_exited += 1;
            } else if (cat.ped_edge_is_crosswalk(next)) {
                cw_push[next] += 1;
            } else {
                sw_join[cat.sidewalk_of_ped_edge(next)] += 1;
            }
        }
    }

    // Walkers within reach arrive and take their pre-drawn transition.
    const double reach = net.ped_reach_m();
    for (int sw = 0; sw < cat.n_sidewalks(); ++sw) {
        auto& walkers = state.walkers[sw];
        if (walkers.empty()) continue;
        const auto arriving = psi_arrivals(walkers, reach);
        if (arriving.empty()) continue;
        for (int i : arriving) {
            const int next = walkers[i].next_edge;
            if (next == kLeaveNetwork) {
                // Trip ends here; exits do not count toward the sidewalk's
                // continuing throughput.
                res.ped_exited += 1;
                continue;
            }
            res.sw_arrived[sw] += 1;
            if (cat.ped_edge_is_crosswalk(next)) {
                cw_push[next] += 1;
            } else {
                sw_join[cat.sidewalk_of_ped_edge(next)] += 1;
            }
        }
        // Stable compaction keeps the remaining walkers in order.
        size_t keep = 0, drop = 0;
        for (size_t i = 0; i < walkers.size(); ++i) {
            if (drop < arriving.size() && static_cast<int>(i) == arriving[drop]) {
                ++drop;
                continue;
            }
            walkers[keep++] = walkers[i];
        }
        walkers.resize(keep);
    }

    // Sidewalk update: advance, exits from the pre-arrival population, then
    // generation and this step's joins at the upstream end.
    for (int sw = 0; sw < cat.n_sidewalks(); ++sw) {
        auto& walkers = state.walkers[sw];
        RngStream& r = rng.at(sidewalk_anchor(net, sw));
        for (auto& w : walkers) w.dist_m -= reach;

        if (rates.ped_out[sw] > 0.0 && !walkers.empty()) {
            std::int64_t k = std::min<std::int64_t>(r.poisson(rates.ped_out[sw]),
                                                    static_cast<std::int64_t>(walkers.size()));
            for (std::int64_t j = 0; j < k; ++j) {
                const size_t pick = r.uniform_index(walkers.size());
                walkers[pick] = walkers.back();
                walkers.pop_back();
                res.ped_exited += 1;
            }
        }

        const int edge = cat.ped_edge_of_sidewalk(sw);
        if (demand_active && rates.ped_in[sw] > 0.0) {
            const std::int64_t k = r.poisson(rates.ped_in[sw]);
            for (std::int64_t j = 0; j < k; ++j) {
                walkers.push_back({net.link_length_m, sample_transition(cat, rates, edge, r)});
            }
            res.ped_generated += k;
        }
        for (std::int64_t j = 0; j < sw_join[sw]; ++j) {
            walkers.push_back({net.link_length_m, sample_transition(cat, rates, edge, r)});
        }
    }

    for (int cw = 0; cw < cat.n_crosswalks(); ++cw) {
        for (std::int64_t k = 0; k < cw_push[cw]; ++k) state.cw_fifo[cw].push_back(next_t);
        res.cw_in[cw] = cw_push[cw];
    }

    state.clock = next_t;
    return res;
}

}  // namespace pqmp
