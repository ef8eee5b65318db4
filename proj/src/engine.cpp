#include "pqmp/engine.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

namespace pqmp {
namespace {

std::string trim_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void verify_state(const TrafficState& state, std::int64_t entered, std::int64_t exited,
                  std::int64_t generated, std::int64_t ped_exited) {
    for (auto q : state.veh_q) {
        if (q < 0) throw std::runtime_error("state check: negative vehicle queue");
    }
    const std::int64_t vehicles = state.total_vehicles();
    if (vehicles != entered - exited) {
        std::ostringstream os;
        os << "state check: vehicle conservation broken at t=" << state.clock << ": in network "
           << vehicles << ", entered " << entered << ", exited " << exited;
        throw std::runtime_error(os.str());
    }
    const std::int64_t peds = state.total_cw_pedestrians() + state.total_walkers();
    if (peds != generated - ped_exited) {
        std::ostringstream os;
        os << "state check: pedestrian conservation broken at t=" << state.clock
           << ": in network " << peds << ", generated " << generated << ", exited " << ped_exited;
        throw std::runtime_error(os.str());
    }
}

}  // namespace

RunSummary run_once(const Scenario& scenario, const RunParams& params,
                    const RunOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    params.controller.validate();

    const MovementCatalog& cat = scenario.catalog;
    const Network& net = scenario.net;
    const double dt = net.step_s();
    const int loading_steps = scenario.config.loading_steps();
    const int total_steps = scenario.config.total_steps();

    RateModel rates = scenario.rates;
    set_entry_demand_vph(cat, rates, params.demand_vph);

    RunSummary out;
    out.params = params;
    out.veh_series.reserve(total_steps);
    out.ped_series.reserve(total_steps);
    out.veh_sumsq.reserve(total_steps + 1);
    out.cw_sumsq.reserve(total_steps + 1);
    out.ledger = DelayLedger::zero(scenario.regions);

    TrafficState state = TrafficState::empty(cat);
    DynamicsRng rng(params.seed, net.n_intersections);
    RngStream measure_rng = RngStream::derive(params.seed, RngDomain::Measurement, 0);

    std::vector<int> chosen(net.n_intersections, 0);
    std::vector<int> previous(net.n_intersections, -1);
    std::vector<char> switched(net.n_intersections, 0);

    std::vector<std::int64_t> veh_in_sum, cw_in_sum, sw_in_sum;
    if (options.record_flows) {
        veh_in_sum.assign(cat.n_movements(), 0);
        cw_in_sum.assign(cat.n_crosswalks(), 0);
        sw_in_sum.assign(cat.n_sidewalks(), 0);
    }

    out.veh_sumsq.push_back(state.veh_sumsq());
    out.cw_sumsq.push_back(state.cw_sumsq());

    std::int64_t entered = 0, exited = 0, generated = 0, ped_exited = 0;
    for (int t = 0; t < total_steps; ++t) {
        if (t % params.controller.update_period == 0) {
            const Observation obs =
                observe(state, cat, dt, params.controller.sigma, measure_rng);
            for (int i = 0; i < net.n_intersections; ++i) {
                chosen[i] = select_phase(params.controller, i, obs, cat, rates, scenario.phases);
            }
        }
        for (int i = 0; i < net.n_intersections; ++i) {
            switched[i] = chosen[i] != previous[i];
            previous[i] = chosen[i];
        }
        const StepDraws draws = realize_saturation(cat, rates, switched,
                                                   scenario.config.lost_time_s, dt, rng);
        const bool demand_active = t < loading_steps;
        const StepResult res =
            advance_step(state, cat, scenario.phases, chosen, draws, rates, demand_active, rng);
        accumulate_delay(out.ledger, state, res, cat, scenario.regions, dt);

        entered += res.veh_entered;
        exited += res.veh_exited;
        generated += res.ped_generated;
        ped_exited += res.ped_exited;

        out.veh_series.push_back(static_cast<double>(state.total_vehicles()));
        out.ped_series.push_back(static_cast<double>(state.total_cw_pedestrians()));
        out.veh_sumsq.push_back(state.veh_sumsq());
        out.cw_sumsq.push_back(state.cw_sumsq());
        if (options.record_trace) {
            std::vector<std::uint8_t> row(net.n_intersections);
            for (int i = 0; i < net.n_intersections; ++i) {
                row[i] = static_cast<std::uint8_t>(chosen[i]);
            }
            out.phase_trace.push_back(std::move(row));
        }
        if (options.record_flows && t < loading_steps) {
            for (int m = 0; m < cat.n_movements(); ++m) veh_in_sum[m] += res.veh_in[m];
            for (int c = 0; c < cat.n_crosswalks(); ++c) cw_in_sum[c] += res.cw_in[c];
            for (int s = 0; s < cat.n_sidewalks(); ++s) sw_in_sum[s] += res.sw_arrived[s];
        }
        if (options.check_every > 0 && t % options.check_every == 0) {
            verify_state(state, entered, exited, generated, ped_exited);
        }
    }

    if (loading_steps >= 20) {
        out.classified = true;
        out.verdicts = classify_run({out.veh_series.data(), static_cast<size_t>(loading_steps)},
                                    {out.ped_series.data(), static_cast<size_t>(loading_steps)});
    }
    if (options.record_flows) {
        const double n = static_cast<double>(loading_steps);
        out.veh_arrival_rate.resize(cat.n_movements());
        out.cw_arrival_rate.resize(cat.n_crosswalks());
        out.sw_arrival_rate.resize(cat.n_sidewalks());
        for (int m = 0; m < cat.n_movements(); ++m) {
            out.veh_arrival_rate[m] = static_cast<double>(veh_in_sum[m]) / n;
        }
        for (int c = 0; c < cat.n_crosswalks(); ++c) {
            out.cw_arrival_rate[c] = static_cast<double>(cw_in_sum[c]) / n;
        }
        for (int s = 0; s < cat.n_sidewalks(); ++s) {
            out.sw_arrival_rate[s] = static_cast<double>(sw_in_sum[s]) / n;
        }
    }
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return out;
}

std::string SweepCell::label() const {
    std::ostringstream os;
    os << to_string(controller.kind);
    if (controller.kind == ControllerKind::PQMP) {
        os << "_l" << trim_number(controller.lambda);
        if (controller.sigma > 0.0) os << "_g" << trim_number(controller.sigma);
    } else if (controller.kind == ControllerKind::RuleBased) {
        os << "_t" << trim_number(controller.tau_s);
    }
    return os.str();
}

SweepResult run_sweep(const Scenario& scenario, int parallel, const RunOptions& options) {
    const ScenarioConfig& cfg = scenario.config;
    SweepResult result;
    for (double demand : cfg.demand_vph) {
        for (double lambda : cfg.lambdas) {
            for (double sigma : cfg.sigmas) {
                ControllerConfig c;
                c.kind = ControllerKind::PQMP;
                c.lambda = lambda;
                c.sigma = sigma;
                c.update_period = cfg.update_period;
                result.cells.push_back({c, demand});
            }
        }
        for (double tau : cfg.taus_s) {
            ControllerConfig c;
            c.kind = ControllerKind::RuleBased;
            c.tau_s = tau;
            c.update_period = cfg.update_period;
            result.cells.push_back({c, demand});
        }
        ControllerConfig q;
        q.kind = ControllerKind::QMP;
        q.update_period = cfg.update_period;
        result.cells.push_back({q, demand});
    }

    const int n_seeds = static_cast<int>(cfg.seeds.size());
    const int n_runs = static_cast<int>(result.cells.size()) * n_seeds;
    result.runs.resize(n_runs);

    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= n_runs) return;
            const SweepCell& cell = result.cells[i / n_seeds];
            RunParams params{cell.controller, cell.demand_vph, cfg.seeds[i % n_seeds]};
            result.runs[i] = run_once(scenario, params, options);
        }
    };
    if (parallel <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < parallel; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    compute_aggregates(result, scenario);
    return result;
}

void compute_aggregates(SweepResult& result, const Scenario& scenario) {
    result.aggregates.clear();
    const int n_seeds = static_cast<int>(result.runs.size() / result.cells.size());
    for (size_t c = 0; c < result.cells.size(); ++c) {
        CellAggregate agg;
        agg.cell = result.cells[c];
        agg.seed_count = n_seeds;
        agg.veh_delay_region_h.assign(scenario.regions.n_regions(), 0.0);
        agg.ped_delay_region_h.assign(scenario.regions.n_regions(), 0.0);
        for (int s = 0; s < n_seeds; ++s) {
            const RunSummary& run = result.runs[c * n_seeds + s];
            agg.veh_delay_h += run.ledger.veh_delay_h();
            agg.ped_delay_h += run.ledger.ped_delay_h();
            agg.person_delay_h +=
                run.person_delay_hours(scenario.config.occupancy_pax_per_veh);
            agg.veh_stable_fraction += run.classified && run.verdicts.vehicles.stable ? 1 : 0;
            agg.ped_stable_fraction += run.classified && run.verdicts.pedestrians.stable ? 1 : 0;
            for (int r = 0; r < scenario.regions.n_regions(); ++r) {
                agg.veh_delay_region_h[r] += run.ledger.veh_delay_region_s[r] / 3600.0;
                agg.ped_delay_region_h[r] += run.ledger.ped_delay_region_s[r] / 3600.0;
            }
        }
        const double n = static_cast<double>(n_seeds);
        agg.veh_delay_h /= n;
        agg.ped_delay_h /= n;
        agg.person_delay_h /= n;
        agg.veh_stable_fraction /= n;
        agg.ped_stable_fraction /= n;
        for (double& v : agg.veh_delay_region_h) v /= n;
        for (double& v : agg.ped_delay_region_h) v /= n;
        result.aggregates.push_back(std::move(agg));
    }
}

}  // namespace pqmp
