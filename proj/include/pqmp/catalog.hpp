#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pqmp/network.hpp"

namespace pqmp {

/// Vehicle movement: traffic on the arriving link queued to join `out`.
struct Movement {
    int in_link = -1;
    int out_link = -1;
    int intersection = -1;
    Dir approach = Dir::N;  // side the arriving link attaches to
    TurnKind turn = TurnKind::Through;
};

inline constexpr int kMovementsPerIntersection = 12;  // 4 approaches x {L,T,R}
inline constexpr int kCrosswalksPerIntersection = 8;

/// Movement and crosswalk catalog over a grid network, with the conflict
/// geometry between right turns and crossings. Movement ids are
/// intersection * 12 + approach * 3 + turn.
class MovementCatalog {
  public:
    explicit MovementCatalog(const Network& net);

    int n_movements() const { return static_cast<int>(movements_.size()); }
    int n_crosswalks() const { return static_cast<int>(net_->crosswalks.size()); }
    int n_sidewalks() const { return static_cast<int>(net_->sidewalks.size()); }

    const Movement& movement(int m) const { return movements_[m]; }
    static int movement_id(int intersection, Dir approach, TurnKind turn) {
        return intersection * kMovementsPerIntersection + idx(approach) * 3 + idx(turn);
    }
    static int local_slot(Dir approach, TurnKind turn) { return idx(approach) * 3 + idx(turn); }

    /// Movements departing from `link` at its head intersection (empty for
    /// exit links: vehicles entering one leave the network).
    const std::vector<int>& movements_from_link(int link) const {
        return link_movements_[link];
    }

    /// Crosswalk movements a served right turn must yield to: both directions
    /// of the crossing spanning its exit leg. Empty for left/through.
    const std::vector<int>& conflicting_crosswalks(int movement) const {
        return conflicts_[movement];
    }

    /// The unique same-intersection downstream crosswalk movement (pedestrians
    /// never immediately walk back across the crossing they just used).
    int next_crosswalk(int cw) const { return next_crosswalk_[cw]; }

    /// Ped edge ids: crosswalks first, then sidewalks.
    int n_ped_edges() const { return n_crosswalks() + n_sidewalks(); }
    int ped_edge_of_crosswalk(int cw) const { return cw; }
    int ped_edge_of_sidewalk(int sw) const { return n_crosswalks() + sw; }
    bool ped_edge_is_crosswalk(int e) const { return e < n_crosswalks(); }
    int crosswalk_of_ped_edge(int e) const { return e; }
    int sidewalk_of_ped_edge(int e) const { return e - n_crosswalks(); }

    /// Head ped node of a ped edge (where its traveller arrives).
    int ped_edge_head(int e) const;
    int ped_edge_tail(int e) const;

    /// Transitions a pedestrian arriving at the head of `e` may take:
    /// crosswalk -> {the non-reversing crosswalk, any sidewalk from the
    /// corner}; sidewalk -> {both corner crosswalks, sidewalks from the corner
    /// except straight back}. Empty when the head is an external endpoint.
    const std::vector<int>& ped_transitions(int e) const { return ped_transitions_[e]; }

    const Network& network() const { return *net_; }

  private:
    const Network* net_;
    std::vector<Movement> movements_;
    std::vector<std::vector<int>> link_movements_;
    std::vector<std::vector<int>> conflicts_;
    std::vector<int> next_crosswalk_;
    std::vector<std::vector<int>> ped_transitions_;
};

}  // namespace pqmp
