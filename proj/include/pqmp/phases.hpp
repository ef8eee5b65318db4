#pragma once

#include <array>
#include <bitset>
#include <string>
#include <vector>

#include "pqmp/catalog.hpp"

namespace pqmp {

/// One admissible phase, expressed in intersection-local slots so a single
/// table serves every intersection of the grid. Vehicle slots are
/// approach * 3 + turn; crosswalk slots are side * 2 + direction.
struct SignalPhase {
    int index = 0;
    std::bitset<kMovementsPerIntersection> veh_served;
    std::bitset<kCrosswalksPerIntersection> cw_served;
    std::string label;

    bool serves_movement_slot(int slot) const { return veh_served.test(slot); }
    bool serves_crosswalk_slot(int slot) const { return cw_served.test(slot); }
};

/// The admissible phase set for a standard 4-approach intersection:
/// through+right and left phases per axis, the through+right ones in four
/// crosswalk variants (none / one parallel side / both), plus one exclusive
/// all-pedestrian phase. 11 phases total.
std::vector<SignalPhase> enumerate_phases();

/// Phase indices of the four vehicle-only families, in catalog order:
/// NS through+right, NS left, EW through+right, EW left.
std::array<int, 4> vehicle_only_phases();

/// For a through+right family phase, the variant of the same family serving
/// both parallel crosswalks; identity for left phases.
int both_crosswalks_variant(int phase_index);

/// Index of the exclusive all-pedestrian phase.
int exclusive_ped_phase();

/// The through+right variant of the axis serving exactly the crossing sides
/// in `sides_mask` (bit idx(Dir)). All sides in the mask must belong to one
/// axis' parallel pair ({E,W} for NS traffic, {N,S} for EW traffic).
int tr_variant_serving(unsigned sides_mask);

}  // namespace pqmp
