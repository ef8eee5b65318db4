#include "pqmp/rates.hpp"

#include <stdexcept>

namespace pqmp {

RateModel make_uniform_rates(const MovementCatalog& cat, double veh_sat_mean, double cw_sat_mean,
                             double sat_cov, double demand_vph_per_entry_link,
                             const std::array<double, 3>& turn_shares_ltr,
                             double ped_in_per_sidewalk_step, double ped_out_per_sidewalk_step) {
    RateModel r;
    r.veh_sat.assign(cat.n_movements(), veh_sat_mean);
    r.cw_sat.assign(cat.n_crosswalks(), cw_sat_mean);
    r.sat_cov = sat_cov;

    r.veh_turn_share.resize(cat.n_movements());
    for (int m = 0; m < cat.n_movements(); ++m) {
        r.veh_turn_share[m] = turn_shares_ltr[idx(cat.movement(m).turn)];
    }

    r.veh_demand.assign(cat.n_movements(), 0.0);
    set_entry_demand_vph(cat, r, demand_vph_per_entry_link);

    r.ped_in.assign(cat.n_sidewalks(), ped_in_per_sidewalk_step);
    r.ped_out.assign(cat.n_sidewalks(), ped_out_per_sidewalk_step);

    r.ped_routing.resize(cat.n_ped_edges());
    for (int e = 0; e < cat.n_ped_edges(); ++e) {
        const auto& options = cat.ped_transitions(e);
        PedRoutingRow& row = r.ped_routing[e];
        if (options.empty()) {
            row.exit_share = 1.0;
        } else {
            row.share.assign(options.size(), 1.0 / static_cast<double>(options.size()));
        }
    }
    return r;
}

void set_entry_demand_vph(const MovementCatalog& cat, RateModel& rates, double demand_vph) {
    const Network& net = cat.network();
    if (demand_vph < 0.0) throw std::invalid_argument("entry demand must be >= 0");
    const double per_step = demand_vph / 3600.0 * net.step_s();
    for (int m = 0; m < cat.n_movements(); ++m) {
        const Movement& mv = cat.movement(m);
        if (net.links[mv.in_link].kind == LinkKind::Entry) {
            rates.veh_demand[m] = per_step * rates.veh_turn_share[m];
        }
    }
}

}  // namespace pqmp
