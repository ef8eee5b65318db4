#pragma once

#include <cstdint>
#include <deque>
#include <numeric>
#include <vector>

#include "pqmp/catalog.hpp"

namespace pqmp {

/// Routing sentinel: the walker leaves the network at its next corner.
inline constexpr int kLeaveNetwork = -1;

/// One pedestrian on a sidewalk: distance left to the downstream ped node
/// and the transition (ped edge id, or kLeaveNetwork) already drawn for it.
struct Walker {
    double dist_m = 0.0;
    int next_edge = kLeaveNetwork;
};

/// Complete simulation state at one time step: vehicle queues per movement,
/// crosswalk queues as FIFOs of arrival steps, and walkers per sidewalk.
struct TrafficState {
    std::vector<std::int64_t> veh_q;
    std::vector<std::deque<std::int32_t>> cw_fifo;
    std::vector<std::vector<Walker>> walkers;
    std::int32_t clock = 0;

    static TrafficState empty(const MovementCatalog& cat) {
        TrafficState s;
        s.veh_q.assign(cat.n_movements(), 0);
        s.cw_fifo.resize(cat.n_crosswalks());
        s.walkers.resize(cat.n_sidewalks());
        return s;
    }

    std::int64_t cw_count(int cw) const { return static_cast<std::int64_t>(cw_fifo[cw].size()); }

    std::int64_t total_vehicles() const {
        return std::accumulate(veh_q.begin(), veh_q.end(), std::int64_t{0});
    }

    std::int64_t total_cw_pedestrians() const {
        std::int64_t n = 0;
        for (const auto& f : cw_fifo) n += static_cast<std::int64_t>(f.size());
        return n;
    }

    std::int64_t total_walkers() const {
        std::int64_t n = 0;
        for (const auto& w : walkers) n += static_cast<std::int64_t>(w.size());
        return n;
    }

    /// Sum of squared queue lengths, the quantity tracked by the quadratic
    /// stability diagnostic.
    double veh_sumsq() const {
        double s = 0.0;
        for (auto q : veh_q) s += static_cast<double>(q) * static_cast<double>(q);
        return s;
    }
    double cw_sumsq() const {
        double s = 0.0;
        for (const auto& f : cw_fifo) {
            const double q = static_cast<double>(f.size());
            s += q * q;
        }
        return s;
    }
};

}  // namespace pqmp
