#include "pqmp/catalog.hpp"

#include <stdexcept>

namespace pqmp {

MovementCatalog::MovementCatalog(const Network& net) : net_(&net) {
    movements_.resize(static_cast<size_t>(net.n_intersections) * kMovementsPerIntersection);
    link_movements_.assign(net.links.size(), {});
    for (int inter = 0; inter < net.n_intersections; ++inter) {
        for (Dir approach : kAllDirs) {
            for (TurnKind turn : {TurnKind::Left, TurnKind::Through, TurnKind::Right}) {
                Movement m;
                m.intersection = inter;
                m.approach = approach;
                m.turn = turn;
                m.in_link = net.in_link[inter][idx(approach)];
                m.out_link = net.out_link[inter][idx(exit_side(approach, turn))];
                const int id = movement_id(inter, approach, turn);
                movements_[id] = m;
                link_movements_[m.in_link].push_back(id);
            }
        }
    }

    conflicts_.assign(movements_.size(), {});
    for (int id = 0; id < n_movements(); ++id) {
        const Movement& m = movements_[id];
        if (m.turn != TurnKind::Right) continue;
        const Dir exit = exit_side(m.approach, m.turn);
        conflicts_[id] = {net.crosswalk_id(m.intersection, exit, 0),
                          net.crosswalk_id(m.intersection, exit, 1)};
    }

    // Crossings form a ring around each intersection; the non-reversing
    // continuation of a crosswalk movement keeps the same rotation sense.
    next_crosswalk_.assign(net.crosswalks.size(), -1);
    for (int cw = 0; cw < n_crosswalks(); ++cw) {
        const Crosswalk& c = net.crosswalks[cw];
        for (int other = c.intersection * 8; other < (c.intersection + 1) * 8; ++other) {
            if (other == cw) continue;
            const Crosswalk& o = net.crosswalks[other];
            if (o.from_corner == c.to_corner && o.to_corner != c.from_corner) {
                next_crosswalk_[cw] = other;
                break;
            }
        }
        if (next_crosswalk_[cw] < 0) {
            throw std::logic_error("catalog: crossing ring is broken");
        }
    }

    ped_transitions_.assign(n_ped_edges(), {});
    for (int e = 0; e < n_ped_edges(); ++e) {
        const int head = ped_edge_head(e);
        if (!net.is_corner(head)) continue;  // external endpoint: walkers leave
        std::vector<int>& out = ped_transitions_[e];
        if (ped_edge_is_crosswalk(e)) {
            out.push_back(ped_edge_of_crosswalk(next_crosswalk_[e]));
            for (int sw : net.sidewalks_from_node[head]) {
                out.push_back(ped_edge_of_sidewalk(sw));
            }
        } else {
            const int inter = net.corner_intersection(head);
            for (int cw = inter * 8; cw < (inter + 1) * 8; ++cw) {
                if (net.crosswalks[cw].from_corner == head) {
                    out.push_back(ped_edge_of_crosswalk(cw));
                }
            }
            const int reverse_to = ped_edge_tail(e);
            for (int sw : net.sidewalks_from_node[head]) {
                if (net.sidewalks[sw].to_node == reverse_to) continue;
                out.push_back(ped_edge_of_sidewalk(sw));
            }
        }
    }
}

int MovementCatalog::ped_edge_head(int e) const {
    return ped_edge_is_crosswalk(e) ? net_->crosswalks[e].to_corner
                                    : net_->sidewalks[sidewalk_of_ped_edge(e)].to_node;
}

int MovementCatalog::ped_edge_tail(int e) const {
    return ped_edge_is_crosswalk(e) ? net_->crosswalks[e].from_corner
                                    : net_->sidewalks[sidewalk_of_ped_edge(e)].from_node;
}

}  // namespace pqmp
