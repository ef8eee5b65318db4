#include "pqmp/stability.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "pqmp/lp.hpp"

namespace pqmp {
namespace {

// Dense LU solve with partial pivoting; the conservation systems are small
// (a few hundred unknowns) and well conditioned when routing leaks.
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b,
                                const char* what) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        }
        if (std::abs(a[piv][k]) < 1e-12) {
            throw std::runtime_error(std::string(what) + ": routing system is singular");
        }
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

void report_trapped(const char* what, const std::vector<int>& trapped) {
    std::ostringstream os;
    os << "steady flows: " << what << " routing traps flow in a cycle;";
    for (size_t i = 0; i < trapped.size() && i < 8; ++i) os << ' ' << trapped[i];
    if (trapped.size() > 8) os << " ...";
    os << " cannot reach a network exit";
    throw std::runtime_error(os.str());
}

// Every movement must have a positive-probability path out of the network,
// otherwise the conservation system is singular. Reverse reachability from
// the exits; whatever stays unreached is the offending cycle.
void check_vehicle_leakage(const MovementCatalog& cat, const RateModel& rates) {
    const Network& net = cat.network();
    const int n = cat.n_movements();
    std::vector<char> reaches(n, 0);
    std::deque<int> queue;
    for (int m = 0; m < n; ++m) {
        if (net.links[cat.movement(m).out_link].kind == LinkKind::Exit) {
            reaches[m] = 1;
            queue.push_back(m);
        }
    }
    while (!queue.empty()) {
        const int m = queue.front();
        queue.pop_front();
        if (rates.veh_turn_share[m] <= 0.0) continue;  // nothing routes onto m
        for (int g = 0; g < n; ++g) {
            if (!reaches[g] && cat.movement(g).out_link == cat.movement(m).in_link) {
                reaches[g] = 1;
                queue.push_back(g);
            }
        }
    }
    std::vector<int> trapped;
    for (int m = 0; m < n; ++m) {
        if (!reaches[m]) trapped.push_back(m);
    }
    if (!trapped.empty()) report_trapped("vehicle", trapped);
}

void check_ped_leakage(const MovementCatalog& cat, const RateModel& rates) {
    const int ne = cat.n_ped_edges();
    std::vector<std::vector<int>> predecessors(ne);
    std::vector<char> reaches(ne, 0);
    std::deque<int> queue;
    for (int e = 0; e < ne; ++e) {
        const auto& options = cat.ped_transitions(e);
        const auto& row = rates.ped_routing[e];
        double mass = row.exit_share;
        for (size_t i = 0; i < options.size(); ++i) {
            if (row.share[i] > 0.0) predecessors[options[i]].push_back(e);
            mass += row.share[i];
        }
        if (options.empty() || row.exit_share > 1e-12 || mass < 1.0 - 1e-9) {
            reaches[e] = 1;
            queue.push_back(e);
        }
    }
    while (!queue.empty()) {
        const int e = queue.front();
        queue.pop_front();
        for (int p : predecessors[e]) {
            if (!reaches[p]) {
                reaches[p] = 1;
                queue.push_back(p);
            }
        }
    }
    std::vector<int> trapped;
    for (int e = 0; e < ne; ++e) {
        if (!reaches[e]) trapped.push_back(e);
    }
    if (!trapped.empty()) report_trapped("pedestrian", trapped);
}

}  // namespace

SteadyFlows solve_steady_flows(const MovementCatalog& cat, const RateModel& rates) {
    check_vehicle_leakage(cat, rates);
    check_ped_leakage(cat, rates);
    const Network& net = cat.network();

    // Vehicles: f_m = demand_m + share_m * sum of flows feeding the arriving
    // link. Assembled as (I - M) f = d.
    {
        const int n = cat.n_movements();
        std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
        std::vector<double> b(n, 0.0);
        for (int m = 0; m < n; ++m) {
            a[m][m] = 1.0;
            b[m] = rates.veh_demand[m];
        }
        for (int g = 0; g < n; ++g) {
            const int out = cat.movement(g).out_link;
            if (net.links[out].kind == LinkKind::Exit) continue;
            for (int m : cat.movements_from_link(out)) {
                a[m][g] -= rates.veh_turn_share[m];
            }
        }
        SteadyFlows flows;
        flows.veh = solve_dense(std::move(a), std::move(b), "vehicle flows");

        // Pedestrians, solved for the JOIN rate of every edge: walkers enter
        // a sidewalk by generation or routing, may be removed mid-walk
        // (per-step draws) and split at the head between leaving (the row's
        // exit share) and the onward options.
        //   J(e) = source(e) + sum share(e'->e) * (J(e') - removal(e'))
        const int ne = cat.n_ped_edges();
        std::vector<std::vector<double>> pa(ne, std::vector<double>(ne, 0.0));
        std::vector<double> pb(ne, 0.0);
        for (int e = 0; e < ne; ++e) {
            pa[e][e] = 1.0;
            if (!cat.ped_edge_is_crosswalk(e)) {
                pb[e] = rates.ped_in[cat.sidewalk_of_ped_edge(e)];
            }
        }
        for (int e = 0; e < ne; ++e) {
            const auto& options = cat.ped_transitions(e);
            const auto& row = rates.ped_routing[e];
            const double removal =
                cat.ped_edge_is_crosswalk(e) ? 0.0 : rates.ped_out[cat.sidewalk_of_ped_edge(e)];
            for (size_t i = 0; i < options.size(); ++i) {
                pa[options[i]][e] -= row.share[i];
                pb[options[i]] -= row.share[i] * removal;
            }
        }
        std::vector<double> joins = solve_dense(std::move(pa), std::move(pb), "pedestrian flows");

        flows.cw.resize(cat.n_crosswalks());
        flows.sw.resize(cat.n_sidewalks());
        for (int cwm = 0; cwm < cat.n_crosswalks(); ++cwm) flows.cw[cwm] = joins[cwm];
        for (int s = 0; s < cat.n_sidewalks(); ++s) {
            const int e = cat.ped_edge_of_sidewalk(s);
            flows.sw[s] = (joins[e] - rates.ped_out[s]) * (1.0 - rates.ped_routing[e].exit_share);
        }
        for (double& f : flows.cw) {
            if (f < 0.0 && f > -1e-9) f = 0.0;
        }
        for (size_t s = 0; s < flows.sw.size(); ++s) {
            if (flows.sw[s] < 0.0 && flows.sw[s] > -1e-9) flows.sw[s] = 0.0;
            if (flows.sw[s] < 0.0) {
                throw std::runtime_error(
                    "steady flows: pedestrian exits exceed arrivals on sidewalk " +
                    std::to_string(s));
            }
        }
        return flows;
    }
}

double steady_flow_residual(const SteadyFlows& flows, const MovementCatalog& cat,
                            const RateModel& rates) {
    const Network& net = cat.network();
    // Relative to the problem scale, so near-zero flows do not dominate.
    double scale = 1e-12;
    for (double f : flows.veh) scale = std::max(scale, std::abs(f));
    for (double f : flows.cw) scale = std::max(scale, std::abs(f));
    for (double f : flows.sw) scale = std::max(scale, std::abs(f));
    double worst = 0.0;
    auto rel = [&](double lhs, double rhs) {
        const double denom = std::max({std::abs(lhs), std::abs(rhs), scale});
        worst = std::max(worst, std::abs(lhs - rhs) / denom);
    };
    for (int m = 0; m < cat.n_movements(); ++m) {
        const Movement& mv = cat.movement(m);
        if (net.links[mv.in_link].kind == LinkKind::Entry) {
            rel(flows.veh[m], rates.veh_demand[m]);
            continue;
        }
        double inflow = 0.0;
        for (int g = 0; g < cat.n_movements(); ++g) {
            if (cat.movement(g).out_link == mv.in_link) inflow += flows.veh[g];
        }
        rel(flows.veh[m], inflow * rates.veh_turn_share[m]);
    }
    // Pedestrian identities, written against the continuing flows: the flow
    // arriving onto an edge is each upstream edge's continuing flow split by
    // its (exit-renormalized) onward ratios.
    const int ne = cat.n_ped_edges();
    std::vector<double> join_in(ne, 0.0);
    auto continuing = [&](int e) {
        return cat.ped_edge_is_crosswalk(e) ? flows.cw[e]
                                            : flows.sw[cat.sidewalk_of_ped_edge(e)];
    };
    for (int e = 0; e < ne; ++e) {
        const auto& options = cat.ped_transitions(e);
        const auto& row = rates.ped_routing[e];
        if (row.exit_share >= 1.0 - 1e-12) continue;  // nothing continues
        const double f = continuing(e) / (1.0 - row.exit_share);
        for (size_t i = 0; i < options.size(); ++i) join_in[options[i]] += f * row.share[i];
    }
    for (int e = 0; e < ne; ++e) {
        const auto& row = rates.ped_routing[e];
        if (cat.ped_edge_is_crosswalk(e)) {
            rel(flows.cw[e], join_in[e]);
            continue;
        }
        const int s = cat.sidewalk_of_ped_edge(e);
        const double joins = join_in[e] + rates.ped_in[s];
        if (row.exit_share >= 1.0 - 1e-12) {
            rel(flows.sw[s], 0.0);
        } else {
            rel(flows.sw[s], (joins - rates.ped_out[s]) * (1.0 - row.exit_share));
        }
    }
    return worst;
}

FeasibilityResult check_feasibility(const SteadyFlows& flows, const MovementCatalog& cat,
                                    const std::vector<SignalPhase>& phases,
                                    const RateModel& rates, const FeasibilityOptions& opt) {
    const Network& net = cat.network();
    const int n_inter = net.n_intersections;
    const int n_phases = static_cast<int>(phases.size());
    FeasibilityResult res;
    res.feasible = true;
    res.slack = std::numeric_limits<double>::infinity();
    res.intersection_slack.resize(n_inter);
    res.pi.resize(n_inter);

    auto capacity = [&](int movement, const SignalPhase& ph) {
        if (!ph.serves_movement_slot(movement % kMovementsPerIntersection)) return 0.0;
        if (!opt.fixed_veh_cap.empty()) return opt.fixed_veh_cap[movement];
        double cap = rates.veh_sat[movement];
        if (opt.ped_adjustment && cat.movement(movement).turn == TurnKind::Right) {
            double worst = 0.0;
            for (int cw : cat.conflicting_crosswalks(movement)) {
                if (!ph.serves_crosswalk_slot(cw % kCrosswalksPerIntersection)) continue;
                const double frac =
                    rates.cw_sat[cw] > 0.0 ? flows.cw[cw] / rates.cw_sat[cw] : 1.0;
                worst = std::max(worst, frac);
            }
            cap *= 1.0 - std::min(1.0, worst);
        }
        return cap;
    };

    // Per intersection: maximize e s.t. sum_e pi_e cap(e, c) - e >= f_c for
    // every movement and crossing c, pi on the simplex. Variables are the
    // phase weights plus e split into positive and negative parts.
    for (int inter = 0; inter < n_inter; ++inter) {
        const int nv = n_phases + 2;
        std::vector<double> objective(nv, 0.0);
        objective[n_phases] = 1.0;
        objective[n_phases + 1] = -1.0;
        std::vector<LpConstraint> cons;
        for (int slot = 0; slot < kMovementsPerIntersection; ++slot) {
            const int m = inter * kMovementsPerIntersection + slot;
            LpConstraint c;
            c.coeff.assign(nv, 0.0);
            for (int e = 0; e < n_phases; ++e) c.coeff[e] = capacity(m, phases[e]);
            c.coeff[n_phases] = -1.0;
            c.coeff[n_phases + 1] = 1.0;
            c.rel = LpRelation::GreaterEq;
            c.rhs = flows.veh[m];
            cons.push_back(std::move(c));
        }
        for (int slot = 0; slot < kCrosswalksPerIntersection; ++slot) {
            const int cw = inter * kCrosswalksPerIntersection + slot;
            LpConstraint c;
            c.coeff.assign(nv, 0.0);
            for (int e = 0; e < n_phases; ++e) {
                c.coeff[e] = phases[e].serves_crosswalk_slot(slot) ? rates.cw_sat[cw] : 0.0;
            }
            c.coeff[n_phases] = -1.0;
            c.coeff[n_phases + 1] = 1.0;
            c.rel = LpRelation::GreaterEq;
            c.rhs = flows.cw[cw];
            cons.push_back(std::move(c));
        }
        LpConstraint simplex;
        simplex.coeff.assign(nv, 0.0);
        for (int e = 0; e < n_phases; ++e) simplex.coeff[e] = 1.0;
        simplex.rel = LpRelation::Equal;
        simplex.rhs = 1.0;
        cons.push_back(std::move(simplex));

        const LpResult lp = maximize_lp(objective, cons);
        if (lp.status != LpResult::Status::Optimal) {
            throw std::runtime_error("feasibility: allocation program did not solve");
        }
        const double slack = lp.objective;
        res.intersection_slack[inter] = slack;
        res.pi[inter].assign(lp.x.begin(), lp.x.begin() + n_phases);
        res.slack = std::min(res.slack, slack);
        if (slack < -1e-9) res.feasible = false;

        for (int slot = 0; slot < kMovementsPerIntersection + kCrosswalksPerIntersection;
             ++slot) {
            const bool is_cw = slot >= kMovementsPerIntersection;
            const int local = is_cw ? slot - kMovementsPerIntersection : slot;
            double served = 0.0;
            for (int e = 0; e < n_phases; ++e) served += res.pi[inter][e] * cons[slot].coeff[e];
            const double margin = served - cons[slot].rhs;
            if (margin <= slack + 1e-6) {
                res.binding.push_back(
                    {inter, is_cw,
                     is_cw ? inter * kCrosswalksPerIntersection + local
                           : inter * kMovementsPerIntersection + local,
                     margin});
            }
        }
    }

    for (int s = 0; s < cat.n_sidewalks(); ++s) {
        if (flows.sw[s] > opt.sidewalk_capacity) {
            res.sidewalk_ok = false;
            res.sidewalk_violations.push_back(s);
        }
    }
    return res;
}

SeriesVerdict classify_series(std::span<const double> series, double theta) {
    if (series.size() < 20) {
        throw std::invalid_argument("classify: series must have at least 20 points");
    }
    const size_t begin = series.size() / 2;
    const size_t n = series.size() - begin;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i);
        const double y = series[begin + i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    SeriesVerdict v;
    v.slope_per_step = denom > 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    v.mean_level = sy / static_cast<double>(n);
    v.threshold = theta * v.mean_level / static_cast<double>(series.size());
    v.stable = !(v.slope_per_step > v.threshold);
    return v;
}

RunClassification classify_run(std::span<const double> veh_series,
                               std::span<const double> ped_series, double theta) {
    return {classify_series(veh_series, theta), classify_series(ped_series, theta)};
}

double lyapunov_drift(double veh_sumsq_t, double veh_sumsq_t1, double cw_sumsq_t,
                      double cw_sumsq_t1, double lambda) {
    return (veh_sumsq_t1 - veh_sumsq_t) + lambda * (cw_sumsq_t1 - cw_sumsq_t);
}

double lyapunov_drift(const TrafficState& at_t, const TrafficState& at_t1, double lambda) {
    return lyapunov_drift(at_t.veh_sumsq(), at_t1.veh_sumsq(), at_t.cw_sumsq(),
                          at_t1.cw_sumsq(), lambda);
}

}  // namespace pqmp
