#pragma once

#include <vector>

#include "pqmp/catalog.hpp"

namespace pqmp {

/// Routing options out of one ped edge head, aligned with
/// MovementCatalog::ped_transitions. `exit_share` is the probability mass of
/// leaving the network at the corner (1 for edges ending at an external
/// endpoint, normally 0 elsewhere).
struct PedRoutingRow {
    std::vector<double> share;  // one entry per allowed transition
    double exit_share = 0.0;
};

/// Mean-level description of all stochastic inputs: saturation flows,
/// turning ratios, vehicle demand and pedestrian generation/exit rates.
/// Controllers and the stability analysis read the means; the dynamics draw
/// per-step realizations around them.
struct RateModel {
    // Saturation flow means, entities per step.
    std::vector<double> veh_sat;  // per movement
    std::vector<double> cw_sat;   // per crosswalk
    /// Coefficient of variation of the saturation draws (0 = deterministic);
    /// draws are clamped to [0, 2 * mean].
    double sat_cov = 0.0;

    /// Mean turning ratio per movement: the share of traffic that, upon
    /// entering the movement's arriving link, queues for this movement.
    /// Rows over movements_from_link(link) sum to 1.
    std::vector<double> veh_turn_share;  // per movement

    /// Vehicle demand, vehicles per step, nonzero only for movements whose
    /// arriving link is an entry link.
    std::vector<double> veh_demand;  // per movement

    /// Pedestrian generation / exit rates per sidewalk, per step.
    std::vector<double> ped_in;
    std::vector<double> ped_out;

    /// Stationary routing shares per ped edge (crosswalks then sidewalks).
    std::vector<PedRoutingRow> ped_routing;

    /// Share of a crosswalk's outflow continuing onto its unique downstream
    /// crosswalk (the first transition entry, by construction).
    double crosswalk_continue_share(const MovementCatalog& cat, int cw) const {
        const PedRoutingRow& row = ped_routing[cat.ped_edge_of_crosswalk(cw)];
        return row.share.empty() ? 0.0 : row.share[0];
    }
};

/// Uniformly structured rate model: one saturation mean per class, one
/// left/through/right split everywhere, identical demand on all entry links
/// (vehicles per hour), and optional flat pedestrian rates. Pedestrian
/// routing defaults to uniform over the allowed transitions; scenario
/// compilation replaces it with demand-derived shares.
RateModel make_uniform_rates(const MovementCatalog& cat, double veh_sat_mean, double cw_sat_mean,
                             double sat_cov, double demand_vph_per_entry_link,
                             const std::array<double, 3>& turn_shares_ltr,
                             double ped_in_per_sidewalk_step = 0.0,
                             double ped_out_per_sidewalk_step = 0.0);

/// Rescales entry demand to a new vehicles-per-hour-per-entry-link level,
/// preserving the per-movement split.
void set_entry_demand_vph(const MovementCatalog& cat, RateModel& rates, double demand_vph);

}  // namespace pqmp
