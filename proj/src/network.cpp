#include "pqmp/network.hpp"

#include <stdexcept>
#include <string>

namespace pqmp {
namespace {

struct GridBuilder {
    Network net;

    int neighbor(int row, int col, Dir d) const {
        switch (d) {
            case Dir::N: return row > 0 ? net.intersection_at(row - 1, col) : -1;
            case Dir::S: return row + 1 < net.rows ? net.intersection_at(row + 1, col) : -1;
            case Dir::W: return col > 0 ? net.intersection_at(row, col - 1) : -1;
            case Dir::E: return col + 1 < net.cols ? net.intersection_at(row, col + 1) : -1;
        }
        return -1;
    }

    // Corner of `node` hit by walking along a link with `heading` on the side
    // `lateral` relative to the roadway, approaching (`arriving`) or leaving.
    int end_corner(int node, Dir heading, bool arriving) const {
        const Dir lateral = right_of(heading);
        const Dir face = arriving ? opposite(heading) : heading;
        return net.corner(node, quadrant_of(face, lateral));
    }
};

}  // namespace

Network build_grid(int rows, int cols, double link_length_m, double veh_speed_mps,
                   double ped_speed_mps) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("build_grid: rows and cols must be >= 1");
    }
    if (link_length_m <= 0.0 || veh_speed_mps <= 0.0 || ped_speed_mps <= 0.0) {
        throw std::invalid_argument("build_grid: lengths and speeds must be positive");
    }

    GridBuilder b;
    Network& net = b.net;
    net.rows = rows;
    net.cols = cols;
    net.link_length_m = link_length_m;
    net.veh_speed_mps = veh_speed_mps;
    net.ped_speed_mps = ped_speed_mps;
    net.n_intersections = rows * cols;

    net.in_link.assign(net.n_intersections, {-1, -1, -1, -1});
    net.out_link.assign(net.n_intersections, {-1, -1, -1, -1});

    int next_veh_node = net.n_intersections;

    // Links arriving at each intersection, scanned row-major, sides in NESW
    // order. Internal links are enumerated once, at their head intersection.
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int inter = net.intersection_at(r, c);
            for (Dir side : kAllDirs) {
                const int nb = b.neighbor(r, c, side);
                Link link;
                link.to = inter;
                link.heading = opposite(side);  // arrives travelling away from `side`
                if (nb >= 0) {
                    link.from = nb;
                    link.kind = LinkKind::Internal;
                } else {
                    link.from = next_veh_node++;
                    link.kind = LinkKind::Entry;
                }
                const int id = static_cast<int>(net.links.size());
                net.links.push_back(link);
                net.in_link[inter][idx(side)] = id;
                if (nb >= 0) net.out_link[nb][idx(opposite(side))] = id;
            }
        }
    }
    // Exit stubs complete the 4-way geometry on the perimeter.
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int inter = net.intersection_at(r, c);
            for (Dir side : kAllDirs) {
                if (b.neighbor(r, c, side) >= 0) continue;
                Link link;
                link.from = inter;
                link.to = next_veh_node++;
                link.kind = LinkKind::Exit;
                link.heading = side;
                const int id = static_cast<int>(net.links.size());
                net.links.push_back(link);
                net.out_link[inter][idx(side)] = id;
            }
        }
    }
    net.n_veh_nodes = next_veh_node;

    // Crosswalks: both walking directions on all four crossings.
    net.crosswalks.reserve(static_cast<size_t>(net.n_intersections) * 8);
    for (int inter = 0; inter < net.n_intersections; ++inter) {
        for (Dir side : kAllDirs) {
            const auto corners = Network::crossing_corners(side);
            for (int direction = 0; direction < 2; ++direction) {
                Crosswalk cw;
                cw.intersection = inter;
                cw.side = side;
                cw.from_corner = net.corner(inter, corners[direction == 0 ? 0 : 1]);
                cw.to_corner = net.corner(inter, corners[direction == 0 ? 1 : 0]);
                net.crosswalks.push_back(cw);
            }
        }
    }

    // Sidewalks: the physical sidewalk sits on the right side of each directed
    // link and carries movements both ways, so every link owns two of them.
    int next_ped_node = 4 * net.n_intersections;
    net.sidewalks.reserve(net.links.size() * 2);
    for (int l = 0; l < static_cast<int>(net.links.size()); ++l) {
        const Link& link = net.links[l];
        int tail_node, head_node;
        if (net.is_intersection_node(link.from)) {
            tail_node = b.end_corner(link.from, link.heading, /*arriving=*/false);
        } else {
            tail_node = next_ped_node++;
        }
        if (net.is_intersection_node(link.to)) {
            head_node = b.end_corner(link.to, link.heading, /*arriving=*/true);
        } else {
            head_node = next_ped_node++;
        }
        net.sidewalks.push_back({tail_node, head_node, l, true});
        net.sidewalks.push_back({head_node, tail_node, l, false});
    }
    net.n_ped_nodes = next_ped_node;

    net.sidewalks_from_node.assign(net.n_ped_nodes, {});
    net.sidewalks_to_node.assign(net.n_ped_nodes, {});
    for (int s = 0; s < static_cast<int>(net.sidewalks.size()); ++s) {
        net.sidewalks_from_node[net.sidewalks[s].from_node].push_back(s);
        net.sidewalks_to_node[net.sidewalks[s].to_node].push_back(s);
    }

    return net;
}

}  // namespace pqmp
