#include <algorithm>
#include <limits>
#include <queue>

#include "pqmp/scenario.hpp"

namespace pqmp {
namespace {

// Nominal walking length of a crossing, only used to rank candidate paths.
constexpr double kCrossingLengthM = 15.0;

struct EdgeDijkstra {
    std::vector<double> dist;
    std::vector<int> parent;

    // Shortest admissible paths over ped edges starting by traversing
    // `origin`. State = "just finished walking edge e".
    EdgeDijkstra(const MovementCatalog& cat, int origin, double sidewalk_cost) {
        const int n = cat.n_ped_edges();
        dist.assign(n, std::numeric_limits<double>::infinity());
        parent.assign(n, -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[origin] = sidewalk_cost;
        heap.push({dist[origin], origin});
        while (!heap.empty()) {
            const auto [d, e] = heap.top();
            heap.pop();
            if (d > dist[e]) continue;
            for (int next : cat.ped_transitions(e)) {
                const double cost =
                    cat.ped_edge_is_crosswalk(next) ? kCrossingLengthM : sidewalk_cost;
                if (d + cost < dist[next]) {
                    dist[next] = d + cost;
                    parent[next] = e;
                    heap.push({dist[next], next});
                }
            }
        }
    }
};

}  // namespace

PedOdSummary compile_ped_od(const MovementCatalog& cat,
                            const std::vector<bool>& sidewalk_in_high_region, double p_high,
                            double p_low, RateModel& rates) {
    const int n_sw = cat.n_sidewalks();
    const int n_edges = cat.n_ped_edges();
    const double sidewalk_cost = cat.network().link_length_m;

    std::vector<double> q_in(n_sw, 0.0), q_out(n_sw, 0.0);
    // Flow through each transition, aligned with ped_transitions(e).
    std::vector<std::vector<double>> through(n_edges);
    for (int e = 0; e < n_edges; ++e) through[e].assign(cat.ped_transitions(e).size(), 0.0);

    PedOdSummary summary;
    summary.centroids = n_sw;

    for (int o = 0; o < n_sw; ++o) {
        const int origin_edge = cat.ped_edge_of_sidewalk(o);
        const EdgeDijkstra paths(cat, origin_edge, sidewalk_cost);
        for (int d = 0; d < n_sw; ++d) {
            if (d == o) continue;
            const double p =
                (sidewalk_in_high_region[o] && sidewalk_in_high_region[d]) ? p_high : p_low;
            if (p <= 0.0) continue;
            ++summary.pairs_total;
            const int dest_edge = cat.ped_edge_of_sidewalk(d);
            if (!std::isfinite(paths.dist[dest_edge])) {
                ++summary.pairs_unreachable;
                continue;
            }
            q_in[o] += p;
            q_out[d] += p;
            summary.total_generation_per_step += p;
            // Walk the parent chain, crediting each transition taken.
            for (int e = dest_edge; e != origin_edge;) {
                const int prev = paths.parent[e];
                const auto& options = cat.ped_transitions(prev);
                for (size_t i = 0; i < options.size(); ++i) {
                    if (options[i] == e) {
                        through[prev][i] += p;
                        break;
                    }
                }
                e = prev;
            }
        }
    }

    rates.ped_in = std::move(q_in);
    // Trip endings are realized by each walker drawing "leave here" with the
    // destined share when it joins the destination sidewalk, so exits track
    // the compiled rates exactly; the per-step removal channel stays unused.
    rates.ped_out.assign(n_sw, 0.0);
    summary.destined_exit_rate = std::move(q_out);
    rates.ped_routing.assign(n_edges, {});
    for (int e = 0; e < n_edges; ++e) {
        const auto& options = cat.ped_transitions(e);
        PedRoutingRow& row = rates.ped_routing[e];
        if (options.empty()) {
            row.exit_share = 1.0;
            continue;
        }
        double continuing = 0.0;
        for (double f : through[e]) continuing += f;
        const double ending =
            cat.ped_edge_is_crosswalk(e) ? 0.0
                                         : summary.destined_exit_rate[cat.sidewalk_of_ped_edge(e)];
        const double total = continuing + ending;
        row.share.resize(options.size());
        if (total > 0.0) {
            row.exit_share = ending / total;
            for (size_t i = 0; i < options.size(); ++i) row.share[i] = through[e][i] / total;
        } else {
            // No compiled flow passes this corner; route the odd stochastic
            // leftover uniformly.
            std::fill(row.share.begin(), row.share.end(),
                      1.0 / static_cast<double>(options.size()));
        }
    }
    return summary;
}

}  // namespace pqmp
