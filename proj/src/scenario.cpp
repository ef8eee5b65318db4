#include "pqmp/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pqmp {
namespace {

using njson = nlohmann::json;

[[noreturn]] void config_error(const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
}

void require_keys(const njson& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) config_error(where + " must be an object");
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                ok = true;
                break;
            }
        }
        if (!ok) config_error("unknown key '" + item.key() + "' in " + where);
    }
}

std::vector<double> as_list(const njson& j, const std::string& where) {
    std::vector<double> out;
    if (j.is_number()) {
        out.push_back(j.get<double>());
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (!v.is_number()) config_error(where + " entries must be numbers");
            out.push_back(v.get<double>());
        }
    } else {
        config_error(where + " must be a number or an array of numbers");
    }
    return out;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (rows < 1 || cols < 1) config_error("rows and cols must be >= 1");
    if (link_length_m <= 0 || veh_speed_mps <= 0 || ped_speed_mps <= 0) {
        config_error("lengths and speeds must be positive");
    }
    if (!(loading_s > 0)) config_error("loading_s must be positive");
    if (cooldown_s < 0) config_error("cooldown_s must be >= 0");
    const double dt = step_s();
    auto divisible = [&](double v) {
        const double steps = v / dt;
        return std::abs(steps - std::round(steps)) < 1e-9;
    };
    if (!divisible(loading_s) || !divisible(cooldown_s)) {
        config_error("loading_s and cooldown_s must be whole multiples of the step (" +
                     std::to_string(dt) + " s)");
    }
    if (demand_vph.empty()) config_error("demand list must not be empty");
    for (double d : demand_vph) {
        if (d < 0) config_error("demand must be >= 0");
    }
    double share_sum = 0;
    for (double s : turn_shares) {
        if (s < 0) config_error("turning shares must be >= 0");
        share_sum += s;
    }
    if (std::abs(share_sum - 1.0) > 1e-9) config_error("turning shares must sum to 1");
    if (od_probability_high < 0 || od_probability_high > 1 || od_probability_low < 0 ||
        od_probability_low > 1) {
        config_error("od probabilities must lie in [0, 1]");
    }
    std::set<int> region_seen;
    for (int i : high_region) {
        if (i < 0 || i >= rows * cols) config_error("high_region id out of range");
        if (!region_seen.insert(i).second) config_error("high_region ids must be distinct");
    }
    if (veh_sat_per_step <= 0 || cw_sat_per_step <= 0) {
        config_error("saturation flow means must be positive");
    }
    if (sat_cov < 0) config_error("saturation cov must be >= 0");
    if (lambdas.empty() || taus_s.empty() || sigmas.empty()) {
        config_error("lambda, tau and sigma sweep lists must not be empty");
    }
    for (double l : lambdas) {
        if (!(l > 0 && l < 1)) config_error("lambda values must lie in (0, 1)");
    }
    for (double t : taus_s) {
        if (!(t > 0)) config_error("tau values must be positive");
    }
    for (double s : sigmas) {
        if (s < 0) config_error("sigma values must be >= 0");
    }
    if (update_period < 1) config_error("update_period must be >= 1");
    if (seeds.empty()) config_error("seed list must not be empty");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
        config_error("seeds must be distinct");
    }
    if (lost_time_s < 0 || lost_time_s >= dt) {
        config_error("lost_time_s must lie in [0, step)");
    }
    if (occupancy_pax_per_veh <= 0) config_error("occupancy must be positive");
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
    njson j;
    try {
        j = njson::parse(text);
    } catch (const njson::parse_error& e) {
        config_error(std::string("not valid JSON: ") + e.what());
    }
    require_keys(j, "config root",
                 {"network", "horizon", "demand", "turning", "pedestrian", "saturation",
                  "controller", "seeds", "lost_time_s", "occupancy_pax_per_veh"});
    ScenarioConfig c;
    if (j.contains("network")) {
        const auto& n = j["network"];
        require_keys(n, "network",
                     {"rows", "cols", "link_length_m", "veh_speed_mps", "ped_speed_mps"});
        c.rows = n.value("rows", c.rows);
        c.cols = n.value("cols", c.cols);
        c.link_length_m = n.value("link_length_m", c.link_length_m);
        c.veh_speed_mps = n.value("veh_speed_mps", c.veh_speed_mps);
        c.ped_speed_mps = n.value("ped_speed_mps", c.ped_speed_mps);
    }
    if (j.contains("horizon")) {
        const auto& h = j["horizon"];
        require_keys(h, "horizon", {"loading_s", "cooldown_s"});
        c.loading_s = h.value("loading_s", c.loading_s);
        c.cooldown_s = h.value("cooldown_s", c.cooldown_s);
    }
    if (j.contains("demand")) {
        const auto& d = j["demand"];
        require_keys(d, "demand", {"vehicle_vph"});
        if (d.contains("vehicle_vph")) c.demand_vph = as_list(d["vehicle_vph"], "vehicle_vph");
    }
    if (j.contains("turning")) {
        const auto& t = j["turning"];
        require_keys(t, "turning", {"left", "through", "right"});
        c.turn_shares[idx(TurnKind::Left)] = t.value("left", c.turn_shares[0]);
        c.turn_shares[idx(TurnKind::Through)] = t.value("through", c.turn_shares[1]);
        c.turn_shares[idx(TurnKind::Right)] = t.value("right", c.turn_shares[2]);
    }
    if (j.contains("pedestrian")) {
        const auto& p = j["pedestrian"];
        require_keys(p, "pedestrian",
                     {"high_region", "od_probability_high", "od_probability_low"});
        if (p.contains("high_region")) {
            const auto& hr = p["high_region"];
            if (hr.is_string()) {
                if (hr.get<std::string>() != "left_half") {
                    config_error("high_region must be \"left_half\" or an id array");
                }
                c.high_region.clear();
                c.high_region_is_default = true;
            } else if (hr.is_array()) {
                c.high_region.clear();
                for (const auto& v : hr) c.high_region.push_back(v.get<int>());
                c.high_region_is_default = false;
            } else {
                config_error("high_region must be \"left_half\" or an id array");
            }
        }
        c.od_probability_high = p.value("od_probability_high", c.od_probability_high);
        c.od_probability_low = p.value("od_probability_low", c.od_probability_low);
    }
    if (j.contains("saturation")) {
        const auto& s = j["saturation"];
        require_keys(s, "saturation", {"vehicle_per_step", "crossing_per_step", "cov"});
        c.veh_sat_per_step = s.value("vehicle_per_step", c.veh_sat_per_step);
        c.cw_sat_per_step = s.value("crossing_per_step", c.cw_sat_per_step);
        c.sat_cov = s.value("cov", c.sat_cov);
    }
    if (j.contains("controller")) {
        const auto& ct = j["controller"];
        require_keys(ct, "controller", {"kind", "lambda", "tau_s", "sigma", "update_period"});
        if (ct.contains("kind")) {
            c.controller_kind = controller_kind_from_string(ct["kind"].get<std::string>());
        }
        if (ct.contains("lambda")) c.lambdas = as_list(ct["lambda"], "lambda");
        if (ct.contains("tau_s")) c.taus_s = as_list(ct["tau_s"], "tau_s");
        if (ct.contains("sigma")) c.sigmas = as_list(ct["sigma"], "sigma");
        c.update_period = ct.value("update_period", c.update_period);
    }
    if (j.contains("seeds")) {
        if (!j["seeds"].is_array()) config_error("seeds must be an array");
        c.seeds.clear();
        for (const auto& v : j["seeds"]) c.seeds.push_back(v.get<std::uint64_t>());
    }
    c.lost_time_s = j.value("lost_time_s", c.lost_time_s);
    c.occupancy_pax_per_veh = j.value("occupancy_pax_per_veh", c.occupancy_pax_per_veh);
    c.validate();
    return c;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("io: cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string ScenarioConfig::to_json_text() const {
    njson j;
    j["network"] = {{"rows", rows},
                    {"cols", cols},
                    {"link_length_m", link_length_m},
                    {"veh_speed_mps", veh_speed_mps},
                    {"ped_speed_mps", ped_speed_mps}};
    j["horizon"] = {{"loading_s", loading_s}, {"cooldown_s", cooldown_s}};
    j["demand"] = {{"vehicle_vph", demand_vph}};
    j["turning"] = {{"left", turn_shares[0]},
                    {"through", turn_shares[1]},
                    {"right", turn_shares[2]}};
    njson ped;
    if (high_region_is_default) {
        ped["high_region"] = "left_half";
    } else {
        ped["high_region"] = high_region;
    }
    ped["od_probability_high"] = od_probability_high;
    ped["od_probability_low"] = od_probability_low;
    j["pedestrian"] = ped;
    j["saturation"] = {{"vehicle_per_step", veh_sat_per_step},
                       {"crossing_per_step", cw_sat_per_step},
                       {"cov", sat_cov}};
    j["controller"] = {{"kind", to_string(controller_kind)},
                       {"lambda", lambdas},
                       {"tau_s", taus_s},
                       {"sigma", sigmas},
                       {"update_period", update_period}};
    j["seeds"] = seeds;
    j["lost_time_s"] = lost_time_s;
    j["occupancy_pax_per_veh"] = occupancy_pax_per_veh;
    return j.dump(2);
}

std::uint64_t ScenarioConfig::config_hash() const {
    const std::string text = to_json_text();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Scenario::Scenario(ScenarioConfig cfg)
    : config(std::move(cfg)),
      net(build_grid(config.rows, config.cols, config.link_length_m, config.veh_speed_mps,
                     config.ped_speed_mps)),
      catalog(net),
      phases(enumerate_phases()),
      rates(make_uniform_rates(catalog, config.veh_sat_per_step, config.cw_sat_per_step,
                               config.sat_cov, config.demand_vph.front(), config.turn_shares)) {
    std::vector<bool> high(net.n_intersections, false);
    if (config.high_region.empty()) {
        const int half = (config.cols + 1) / 2;
        for (int r = 0; r < config.rows; ++r) {
            for (int c = 0; c < half; ++c) high[net.intersection_at(r, c)] = true;
        }
    } else {
        for (int i : config.high_region) high[i] = true;
    }
    regions.labels = {"green", "blue"};
    regions.region_of_intersection.resize(net.n_intersections);
    for (int i = 0; i < net.n_intersections; ++i) {
        regions.region_of_intersection[i] = high[i] ? 0 : 1;
    }

    // A sidewalk belongs to the region of the intersection owning its corner
    // endpoint (the inner one for boundary stubs).
    std::vector<bool> sw_high(catalog.n_sidewalks());
    for (int s = 0; s < catalog.n_sidewalks(); ++s) {
        const Sidewalk& sw = net.sidewalks[s];
        const int anchor = net.is_corner(sw.from_node) ? sw.from_node : sw.to_node;
        sw_high[s] = high[net.corner_intersection(anchor)];
    }
    od = compile_ped_od(catalog, sw_high, config.od_probability_high, config.od_probability_low,
                        rates);
}

std::unique_ptr<Scenario> compile_scenario(ScenarioConfig cfg) {
    cfg.validate();
    return std::make_unique<Scenario>(std::move(cfg));
}

}  // namespace pqmp
