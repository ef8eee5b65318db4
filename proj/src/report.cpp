#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "pqmp/engine.hpp"

namespace pqmp {
namespace {

namespace fs = std::filesystem;

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("io: cannot write " + path.string());
    return out;
}

std::string run_file_stem(const SweepCell& cell, std::uint64_t seed) {
    return cell.label() + "_d" + fmt6(cell.demand_vph) + "_s" + std::to_string(seed);
}

void write_series(const fs::path& path, const RunSummary& run, double step_s) {
    auto out = open_out(path);
    out << "step,seconds,total_vehicles,total_cw_pedestrians\n";
    for (size_t k = 0; k < run.veh_series.size(); ++k) {
        out << (k + 1) << ',' << fmt6(static_cast<double>(k + 1) * step_s) << ','
            << fmt6(run.veh_series[k]) << ',' << fmt6(run.ped_series[k]) << '\n';
    }
}

void write_trace(const fs::path& path, const RunSummary& run) {
    auto out = open_out(path);
    out << "step,intersection,phase\n";
    for (size_t k = 0; k < run.phase_trace.size(); ++k) {
        for (size_t i = 0; i < run.phase_trace[k].size(); ++i) {
            out << (k + 1) << ',' << i << ',' << static_cast<int>(run.phase_trace[k][i]) << '\n';
        }
    }
}

std::string controller_column(const ControllerConfig& c) {
    std::string token = to_string(c.kind);
    if (c.kind == ControllerKind::PQMP && c.sigma > 0.0) {
        token += "@sigma=" + fmt6(c.sigma);
    }
    return token;
}

std::string param_column(const ControllerConfig& c) {
    switch (c.kind) {
        case ControllerKind::PQMP: return fmt6(c.lambda);
        case ControllerKind::RuleBased: return fmt6(c.tau_s);
        case ControllerKind::QMP: return "";
    }
    return "";
}

void write_aggregate(const fs::path& path, const SweepResult& result,
                     const RegionMap& regions) {
    auto out = open_out(path);
    out << "controller,param,demand_vph,seed_count,veh_delay_h,ped_delay_h,person_delay_h,"
           "veh_stable,ped_stable";
    for (const auto& label : regions.labels) {
        out << ",veh_delay_h_" << label << ",ped_delay_h_" << label;
    }
    out << '\n';
    for (const CellAggregate& a : result.aggregates) {
        out << controller_column(a.cell.controller) << ',' << param_column(a.cell.controller)
            << ',' << fmt6(a.cell.demand_vph) << ',' << a.seed_count << ','
            << fmt6(a.veh_delay_h) << ',' << fmt6(a.ped_delay_h) << ','
            << fmt6(a.person_delay_h) << ',' << fmt6(a.veh_stable_fraction) << ','
            << fmt6(a.ped_stable_fraction);
        for (int r = 0; r < regions.n_regions(); ++r) {
            out << ',' << fmt6(a.veh_delay_region_h[r]) << ',' << fmt6(a.ped_delay_region_h[r]);
        }
        out << '\n';
    }
}

void write_reductions(const fs::path& path, const SweepResult& result) {
    auto out = open_out(path);
    out << "controller,param,demand_vph,veh_delay_reduction_h,ped_delay_reduction_h,"
           "person_delay_reduction_h\n";
    for (const CellAggregate& a : result.aggregates) {
        if (a.cell.controller.kind == ControllerKind::QMP) continue;
        const CellAggregate* baseline = nullptr;
        for (const CellAggregate& b : result.aggregates) {
            if (b.cell.controller.kind == ControllerKind::QMP &&
                b.cell.demand_vph == a.cell.demand_vph) {
                baseline = &b;
                break;
            }
        }
        if (!baseline) continue;
        out << controller_column(a.cell.controller) << ',' << param_column(a.cell.controller)
            << ',' << fmt6(a.cell.demand_vph) << ','
            << fmt6(baseline->veh_delay_h - a.veh_delay_h) << ','
            << fmt6(baseline->ped_delay_h - a.ped_delay_h) << ','
            << fmt6(baseline->person_delay_h - a.person_delay_h) << '\n';
    }
}

void write_manifest(const fs::path& path, const Scenario& scenario, const SweepResult& result,
                    const std::vector<std::string>& run_files) {
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(scenario.config.to_json_text());
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(scenario.config.config_hash()));
    j["config_hash"] = hash;
    j["step_s"] = scenario.net.step_s();
    j["seeds"] = scenario.config.seeds;
    j["ped_od"] = {{"centroids", scenario.od.centroids},
                   {"pairs_total", scenario.od.pairs_total},
                   {"pairs_unreachable", scenario.od.pairs_unreachable},
                   {"total_generation_per_step", scenario.od.total_generation_per_step}};
    j["compiled_ped_rates"] = {{"q_in_per_step", scenario.rates.ped_in},
                               {"q_out_per_step", scenario.od.destined_exit_rate}};
    nlohmann::json routing = nlohmann::json::array();
    for (size_t e = 0; e < scenario.rates.ped_routing.size(); ++e) {
        const auto& row = scenario.rates.ped_routing[e];
        routing.push_back({{"edge", e}, {"share", row.share}, {"exit", row.exit_share}});
    }
    j["compiled_ped_rates"]["routing"] = routing;
    nlohmann::json cells = nlohmann::json::array();
    double wall_total = 0.0;
    for (size_t i = 0; i < result.runs.size(); ++i) wall_total += result.runs[i].wall_ms;
    for (size_t c = 0; c < result.cells.size(); ++c) {
        cells.push_back({{"label", result.cells[c].label()},
                         {"demand_vph", result.cells[c].demand_vph}});
    }
    j["cells"] = cells;
    j["run_files"] = run_files;
    j["wall_ms_total"] = wall_total;  // wall-clock: excluded from determinism comparisons
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace

void emit_report(const Scenario& scenario, const SweepResult& result,
                 const std::string& out_dir) {
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("io: cannot create output directory " + dir.string());

    const int n_seeds = result.cells.empty()
                            ? 0
                            : static_cast<int>(result.runs.size() / result.cells.size());
    std::vector<std::string> run_files;
    for (size_t c = 0; c < result.cells.size(); ++c) {
        for (int s = 0; s < n_seeds; ++s) {
            const RunSummary& run = result.runs[c * n_seeds + s];
            const std::string stem = run_file_stem(result.cells[c], run.params.seed);
            write_series(dir / ("series_" + stem + ".csv"), run, scenario.net.step_s());
            run_files.push_back("series_" + stem + ".csv");
            if (!run.phase_trace.empty()) {
                write_trace(dir / ("trace_" + stem + ".csv"), run);
                run_files.push_back("trace_" + stem + ".csv");
            }
        }
    }
    write_aggregate(dir / "aggregate.csv", result, scenario.regions);
    write_reductions(dir / "reductions.csv", result);
    write_manifest(dir / "manifest.json", scenario, result, run_files);
}

void emit_report(const Scenario& scenario, const RunSummary& run, const std::string& out_dir) {
    SweepResult single;
    single.cells.push_back({run.params.controller, run.params.demand_vph});
    single.runs.push_back(run);
    compute_aggregates(single, scenario);
    emit_report(scenario, single, out_dir);
}

}  // namespace pqmp
