#include "pqmp/phases.hpp"

#include <stdexcept>

namespace pqmp {
namespace {

void serve_tr(SignalPhase& ph, Dir approach) {
    ph.veh_served.set(MovementCatalog::local_slot(approach, TurnKind::Through));
    ph.veh_served.set(MovementCatalog::local_slot(approach, TurnKind::Right));
}

void serve_left(SignalPhase& ph, Dir approach) {
    ph.veh_served.set(MovementCatalog::local_slot(approach, TurnKind::Left));
}

void serve_crossing(SignalPhase& ph, Dir side) {
    ph.cw_served.set(idx(side) * 2 + 0);
    ph.cw_served.set(idx(side) * 2 + 1);
}

// Axis phases: `approaches` carry the vehicles, `parallel` are the crossing
// sides pedestrians may share with the through+right phase.
std::vector<SignalPhase> axis_phases(const std::string& axis, std::array<Dir, 2> approaches,
                                     std::array<Dir, 2> parallel) {
    std::vector<SignalPhase> out;
    const std::array<std::vector<Dir>, 4> variants = {
        std::vector<Dir>{}, {parallel[0]}, {parallel[0], parallel[1]}, {parallel[1]}};
    const std::array<std::string, 4> suffix = {"", "+" + std::string(name(parallel[0])),
                                               "+both", "+" + std::string(name(parallel[1]))};
    for (int v = 0; v < 4; ++v) {
        SignalPhase ph;
        ph.label = axis + "-TR" + suffix[v];
        serve_tr(ph, approaches[0]);
        serve_tr(ph, approaches[1]);
        for (Dir side : variants[v]) serve_crossing(ph, side);
        out.push_back(ph);
    }
    SignalPhase left;
    left.label = axis + "-L";
    serve_left(left, approaches[0]);
    serve_left(left, approaches[1]);
    out.push_back(left);
    return out;
}

}  // namespace

std::vector<SignalPhase> enumerate_phases() {
    std::vector<SignalPhase> phases;
    // North-south traffic approaches from the N and S sides; its parallel
    // crossings span the E and W legs (those pedestrians walk north-south).
    for (auto& ph : axis_phases("NS", {Dir::N, Dir::S}, {Dir::E, Dir::W})) {
        phases.push_back(std::move(ph));
    }
    for (auto& ph : axis_phases("EW", {Dir::E, Dir::W}, {Dir::N, Dir::S})) {
        phases.push_back(std::move(ph));
    }
    SignalPhase ped;
    ped.label = "PED";
    ped.cw_served.set();
    phases.push_back(std::move(ped));
    for (int i = 0; i < static_cast<int>(phases.size()); ++i) phases[i].index = i;
    return phases;
}

std::array<int, 4> vehicle_only_phases() { return {0, 4, 5, 9}; }

int both_crosswalks_variant(int phase_index) {
    if (phase_index >= 0 && phase_index <= 3) return 2;
    if (phase_index >= 5 && phase_index <= 8) return 7;
    return phase_index;
}

int exclusive_ped_phase() { return 10; }

int tr_variant_serving(unsigned sides_mask) {
    const unsigned ns_mask = (1u << idx(Dir::E)) | (1u << idx(Dir::W));
    const unsigned ew_mask = (1u << idx(Dir::N)) | (1u << idx(Dir::S));
    if (sides_mask != 0 && (sides_mask & ~ns_mask) == 0) {
        if (sides_mask == (1u << idx(Dir::E))) return 1;
        if (sides_mask == (1u << idx(Dir::W))) return 3;
        return 2;
    }
    if (sides_mask != 0 && (sides_mask & ~ew_mask) == 0) {
        if (sides_mask == (1u << idx(Dir::N))) return 6;
        if (sides_mask == (1u << idx(Dir::S))) return 8;
        return 7;
    }
    throw std::invalid_argument("tr_variant_serving: sides must lie on one axis");
}

}  // namespace pqmp
