#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pqmp/geometry.hpp"

namespace pqmp {

enum class LinkKind : std::uint8_t { Entry = 0, Internal = 1, Exit = 2 };

/// Directed roadway link. `from`/`to` are node ids: intersections first,
/// then one external node per boundary stub.
struct Link {
    int from = -1;
    int to = -1;
    LinkKind kind = LinkKind::Internal;
    Dir heading = Dir::N;
};

/// Directed crosswalk movement between two corners of one intersection.
struct Crosswalk {
    int from_corner = -1;
    int to_corner = -1;
    int intersection = -1;
    Dir side = Dir::N;  // side of the intersection the crossing spans
};

/// Directed pedestrian movement along the right-side sidewalk of `link`.
/// Walking direction matches the link heading when `forward` is true.
struct Sidewalk {
    int from_node = -1;  // ped node id (corner or external endpoint)
    int to_node = -1;
    int link = -1;
    bool forward = true;
};

/// Grid network of two-way streets with per-intersection corner nodes,
/// crosswalks on all four sides and sidewalks on both sides of every street
/// (boundary stubs included). Immutable after construction.
///
/// Id conventions, all deterministic in (rows, cols):
///   intersection  r * cols + c                     (row 0 = north, col 0 = west)
///   corner node   intersection * 4 + quadrant
///   crosswalk     intersection * 8 + side * 2 + direction bit
///   sidewalk      link * 2 + direction bit
struct Network {
    int rows = 0;
    int cols = 0;
    double link_length_m = 0.0;
    double veh_speed_mps = 0.0;
    double ped_speed_mps = 0.0;

    int n_intersections = 0;
    int n_veh_nodes = 0;  // intersections + external road endpoints
    int n_ped_nodes = 0;  // 4 * intersections + external sidewalk endpoints

    std::vector<Link> links;
    std::vector<Crosswalk> crosswalks;
    std::vector<Sidewalk> sidewalks;

    /// Arriving link per intersection and side (always present, grid is 4-way).
    std::vector<std::array<int, 4>> in_link;
    /// Departing link per intersection and side.
    std::vector<std::array<int, 4>> out_link;

    /// Sidewalks leaving / entering each ped node, in id order.
    std::vector<std::vector<int>> sidewalks_from_node;
    std::vector<std::vector<int>> sidewalks_to_node;

    double step_s() const { return link_length_m / veh_speed_mps; }
    /// Walking distance covered in one time step.
    double ped_reach_m() const { return ped_speed_mps * step_s(); }

    int intersection_at(int row, int col) const { return row * cols + col; }
    int corner(int intersection, Quadrant q) const { return intersection * 4 + idx(q); }
    int crosswalk_id(int intersection, Dir side, int direction) const {
        return intersection * 8 + idx(side) * 2 + direction;
    }
    int sidewalk_id(int link, bool forward) const { return link * 2 + (forward ? 0 : 1); }

    bool is_corner(int ped_node) const { return ped_node < 4 * n_intersections; }
    int corner_intersection(int ped_node) const { return ped_node / 4; }
    Quadrant corner_quadrant(int ped_node) const { return static_cast<Quadrant>(ped_node % 4); }

    bool is_intersection_node(int node) const { return node < n_intersections; }

    /// The two corners spanned by the crossing on `side`, listed clockwise
    /// (NW->NE->SE->SW). Crosswalk direction bit 0 walks clockwise.
    static std::array<Quadrant, 2> crossing_corners(Dir side) {
        switch (side) {
            case Dir::N: return {Quadrant::NW, Quadrant::NE};
            case Dir::E: return {Quadrant::NE, Quadrant::SE};
            case Dir::S: return {Quadrant::SE, Quadrant::SW};
            case Dir::W: return {Quadrant::SW, Quadrant::NW};
        }
        throw std::invalid_argument("crossing_corners: bad side");
    }
};

/// Builds a rows x cols grid of two-way streets with entry/exit stubs on the
/// perimeter. The time step equals the vehicle free-flow traversal time of a
/// link, so speeds and length fix the discretization.
Network build_grid(int rows, int cols, double link_length_m, double veh_speed_mps,
                   double ped_speed_mps);

}  // namespace pqmp
