#include "doctest.h"
#include "pqmp/catalog.hpp"
#include "pqmp/network.hpp"

using namespace pqmp;

namespace {

int count_links(const Network& net, LinkKind kind) {
    int n = 0;
    for (const Link& l : net.links) {
        if (l.kind == kind) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("5x5 grid matches the reference setup") {
    const Network net = build_grid(5, 5, 300.0, 15.0, 1.3);
    CHECK(net.n_intersections == 25);
    CHECK(net.step_s() == doctest::Approx(20.0));
    CHECK(count_links(net, LinkKind::Entry) == 20);
    CHECK(count_links(net, LinkKind::Exit) == 20);
    CHECK(count_links(net, LinkKind::Internal) == 80);
    CHECK(static_cast<int>(net.crosswalks.size()) == 200);
    CHECK(static_cast<int>(net.sidewalks.size()) == 240);
    CHECK(net.ped_reach_m() == doctest::Approx(26.0));
}

TEST_CASE("smallest grid: one intersection, four stubs each way") {
    const Network net = build_grid(1, 1, 300.0, 15.0, 1.3);
    CHECK(net.n_intersections == 1);
    CHECK(count_links(net, LinkKind::Entry) == 4);
    CHECK(count_links(net, LinkKind::Exit) == 4);
    CHECK(count_links(net, LinkKind::Internal) == 0);
    CHECK(static_cast<int>(net.crosswalks.size()) == 8);
    CHECK(net.n_ped_nodes - 4 * net.n_intersections == 8);  // one endpoint per boundary stub
}

TEST_CASE("2x2 grid internal structure") {
    const Network net = build_grid(2, 2, 300.0, 15.0, 1.3);
    CHECK(net.n_intersections == 4);
    CHECK(count_links(net, LinkKind::Internal) == 8);  // four two-way street segments
    CHECK(count_links(net, LinkKind::Entry) == 8);
}

TEST_CASE("grid construction rejects bad arguments") {
    CHECK_THROWS_AS(build_grid(0, 5, 300, 15, 1.3), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(5, -1, 300, 15, 1.3), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(5, 5, 0, 15, 1.3), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(5, 5, 300, 15, 0), std::invalid_argument);
}

TEST_CASE("grid construction is deterministic") {
    const Network a = build_grid(3, 4, 250.0, 12.5, 1.2);
    const Network b = build_grid(3, 4, 250.0, 12.5, 1.2);
    REQUIRE(a.links.size() == b.links.size());
    for (size_t i = 0; i < a.links.size(); ++i) {
        CHECK(a.links[i].from == b.links[i].from);
        CHECK(a.links[i].to == b.links[i].to);
    }
    REQUIRE(a.sidewalks.size() == b.sidewalks.size());
    for (size_t i = 0; i < a.sidewalks.size(); ++i) {
        CHECK(a.sidewalks[i].from_node == b.sidewalks[i].from_node);
        CHECK(a.sidewalks[i].to_node == b.sidewalks[i].to_node);
    }
}

TEST_CASE("every intersection has four approaches and four departures") {
    const Network net = build_grid(3, 3, 300.0, 15.0, 1.3);
    for (int i = 0; i < net.n_intersections; ++i) {
        for (Dir d : kAllDirs) {
            REQUIRE(net.in_link[i][idx(d)] >= 0);
            REQUIRE(net.out_link[i][idx(d)] >= 0);
            CHECK(net.links[net.in_link[i][idx(d)]].to == i);
            CHECK(net.links[net.out_link[i][idx(d)]].from == i);
        }
    }
}

TEST_CASE("corner adjacency matches the worked sidewalk example") {
    // In a 2x3 grid, take j with a west neighbor i and a south neighbor k:
    // j_SW's same-intersection neighbors are j_NW and j_SE, and its sidewalk
    // neighbors are i_SE and k_NW.
    const Network net = build_grid(2, 3, 300.0, 15.0, 1.3);
    const int i = net.intersection_at(0, 0);
    const int j = net.intersection_at(0, 1);
    const int k = net.intersection_at(1, 1);
    const int j_sw = net.corner(j, Quadrant::SW);

    std::vector<int> same_intersection;
    for (const Crosswalk& cw : net.crosswalks) {
        if (cw.from_corner == j_sw) same_intersection.push_back(cw.to_corner);
    }
    REQUIRE(same_intersection.size() == 2);
    CHECK((same_intersection[0] == net.corner(j, Quadrant::NW) ||
           same_intersection[1] == net.corner(j, Quadrant::NW)));
    CHECK((same_intersection[0] == net.corner(j, Quadrant::SE) ||
           same_intersection[1] == net.corner(j, Quadrant::SE)));

    std::vector<int> upstream;
    for (int sw : net.sidewalks_to_node[j_sw]) upstream.push_back(net.sidewalks[sw].from_node);
    REQUIRE(upstream.size() == 2);
    CHECK((upstream[0] == net.corner(i, Quadrant::SE) || upstream[1] == net.corner(i, Quadrant::SE)));
    CHECK((upstream[0] == net.corner(k, Quadrant::NW) || upstream[1] == net.corner(k, Quadrant::NW)));
}

TEST_CASE("movement catalog covers all approaches and classifies conflicts") {
    const Network net = build_grid(2, 2, 300.0, 15.0, 1.3);
    const MovementCatalog cat(net);
    CHECK(cat.n_movements() == 4 * kMovementsPerIntersection);

    int rights = 0;
    for (int m = 0; m < cat.n_movements(); ++m) {
        const auto& conflicts = cat.conflicting_crosswalks(m);
        if (cat.movement(m).turn == TurnKind::Right) {
            ++rights;
            CHECK(conflicts.size() == 2);
        } else {
            CHECK(conflicts.empty());
        }
    }
    CHECK(rights == 4 * 4);

    // Northbound right turn (approach from the south) crosses the eastern
    // crossing of its intersection, both walking directions.
    const int inter = 0;
    const int m = MovementCatalog::movement_id(inter, Dir::S, TurnKind::Right);
    const auto& c = cat.conflicting_crosswalks(m);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == net.crosswalk_id(inter, Dir::E, 0));
    CHECK(c[1] == net.crosswalk_id(inter, Dir::E, 1));
}

TEST_CASE("crosswalk continuation never reverses and cycles the corner ring") {
    const Network net = build_grid(2, 2, 300.0, 15.0, 1.3);
    const MovementCatalog cat(net);
    for (int cw = 0; cw < cat.n_crosswalks(); ++cw) {
        const int next = cat.next_crosswalk(cw);
        CHECK(net.crosswalks[next].from_corner == net.crosswalks[cw].to_corner);
        CHECK(net.crosswalks[next].to_corner != net.crosswalks[cw].from_corner);
        int e = cw;
        for (int hops = 0; hops < 4; ++hops) e = cat.next_crosswalk(e);
        CHECK(e == cw);  // four crossings form a ring
    }
}

TEST_CASE("ped transitions respect the no-immediate-reversal rules") {
    const Network net = build_grid(2, 2, 300.0, 15.0, 1.3);
    const MovementCatalog cat(net);
    for (int e = 0; e < cat.n_ped_edges(); ++e) {
        const int head = cat.ped_edge_head(e);
        for (int next : cat.ped_transitions(e)) {
            CHECK(cat.ped_edge_tail(next) == head);
            CHECK(cat.ped_edge_head(next) != cat.ped_edge_tail(e));
        }
        if (!net.is_corner(head)) CHECK(cat.ped_transitions(e).empty());
    }
}
