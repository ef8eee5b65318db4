#include <iostream>
#include "doctest.h"
#include "pqmp/phases.hpp"

using namespace pqmp;

TEST_CASE("phase set has the eleven admissible phases") {
    const auto phases = enumerate_phases();
    REQUIRE(phases.size() == 11);
    for (size_t i = 0; i < phases.size(); ++i) CHECK(phases[i].index == static_cast<int>(i));

    int exclusive = 0;
    std::bitset<kMovementsPerIntersection> veh_union;
    std::bitset<kCrosswalksPerIntersection> cw_union;
    for (const SignalPhase& ph : phases) {
        veh_union |= ph.veh_served;
        cw_union |= ph.cw_served;
        if (ph.veh_served.none() && ph.cw_served.all()) ++exclusive;
    }
    CHECK(exclusive == 1);
    // Every movement and crossing is servable by some phase.
    CHECK(veh_union.all());
    CHECK(cw_union.all());
}

TEST_CASE("left phases never serve pedestrians") {
    const auto phases = enumerate_phases();
    CHECK(phases[4].cw_served.none());
    CHECK(phases[9].cw_served.none());
    CHECK(phases[4].veh_served.count() == 2);
    CHECK(phases[9].veh_served.count() == 2);
}

TEST_CASE("through+right variants serve only parallel-side crossings") {
    const auto phases = enumerate_phases();
    auto side_slots = [](Dir side) {
        return std::make_pair(idx(side) * 2, idx(side) * 2 + 1);
    };
    for (int v = 0; v <= 3; ++v) {
        // NS traffic: served crossings only on the E and W sides.
        for (Dir banned : {Dir::N, Dir::S}) {
            const auto [a, b] = side_slots(banned);
            CHECK_FALSE(phases[v].cw_served.test(a));
            CHECK_FALSE(phases[v].cw_served.test(b));
        }
        CHECK(phases[v].veh_served ==
              (std::bitset<12>().set(MovementCatalog::local_slot(Dir::N, TurnKind::Through)) |
               std::bitset<12>().set(MovementCatalog::local_slot(Dir::N, TurnKind::Right)) |
               std::bitset<12>().set(MovementCatalog::local_slot(Dir::S, TurnKind::Through)) |
               std::bitset<12>().set(MovementCatalog::local_slot(Dir::S, TurnKind::Right))));
    }
    CHECK(phases[0].cw_served.none());
    CHECK(phases[2].cw_served.count() == 4);  // both parallel sides
    CHECK(phases[1].cw_served.count() == 2);
    CHECK(phases[3].cw_served.count() == 2);
}

TEST_CASE("family helpers map variants consistently") {
    CHECK(vehicle_only_phases() == std::array<int, 4>{0, 4, 5, 9});
    CHECK(both_crosswalks_variant(0) == 2);
    CHECK(both_crosswalks_variant(3) == 2);
    CHECK(both_crosswalks_variant(5) == 7);
    CHECK(both_crosswalks_variant(4) == 4);  // left phases have no variant
    CHECK(exclusive_ped_phase() == 10);

    CHECK(tr_variant_serving(1u << idx(Dir::E)) == 1);
    CHECK(tr_variant_serving(1u << idx(Dir::W)) == 3);
    CHECK(tr_variant_serving((1u << idx(Dir::E)) | (1u << idx(Dir::W))) == 2);
    CHECK(tr_variant_serving(1u << idx(Dir::N)) == 6);
    CHECK(tr_variant_serving(1u << idx(Dir::S)) == 8);
    CHECK(tr_variant_serving((1u << idx(Dir::N)) | (1u << idx(Dir::S))) == 7);
    CHECK_THROWS(tr_variant_serving((1u << idx(Dir::N)) | (1u << idx(Dir::E))));
}
