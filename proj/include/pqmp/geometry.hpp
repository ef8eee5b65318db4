#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace pqmp {

/// Compass direction, used both for travel headings and for the side of an
/// intersection a link or crosswalk attaches to.
enum class Dir : std::uint8_t { N = 0, E = 1, S = 2, W = 3 };

inline constexpr std::array<Dir, 4> kAllDirs{Dir::N, Dir::E, Dir::S, Dir::W};

constexpr int idx(Dir d) { return static_cast<int>(d); }
constexpr Dir opposite(Dir d) { return static_cast<Dir>((idx(d) + 2) % 4); }
constexpr Dir right_of(Dir d) { return static_cast<Dir>((idx(d) + 1) % 4); }
constexpr Dir left_of(Dir d) { return static_cast<Dir>((idx(d) + 3) % 4); }

constexpr std::string_view name(Dir d) {
    constexpr std::string_view names[4] = {"N", "E", "S", "W"};
    return names[idx(d)];
}

/// Corner of an intersection, named by the two sides it touches.
enum class Quadrant : std::uint8_t { NE = 0, NW = 1, SE = 2, SW = 3 };

constexpr int idx(Quadrant q) { return static_cast<int>(q); }

constexpr std::string_view name(Quadrant q) {
    constexpr std::string_view names[4] = {"NE", "NW", "SE", "SW"};
    return names[idx(q)];
}

/// Quadrant touching both given sides; the two sides must be perpendicular.
constexpr Quadrant quadrant_of(Dir a, Dir b) {
    const bool north = (a == Dir::N || b == Dir::N);
    const bool south = (a == Dir::S || b == Dir::S);
    const bool east = (a == Dir::E || b == Dir::E);
    const bool west = (a == Dir::W || b == Dir::W);
    if (north && east) return Quadrant::NE;
    if (north && west) return Quadrant::NW;
    if (south && east) return Quadrant::SE;
    if (south && west) return Quadrant::SW;
    throw std::invalid_argument("quadrant_of: sides must be perpendicular");
}

enum class TurnKind : std::uint8_t { Left = 0, Through = 1, Right = 2 };

constexpr int idx(TurnKind t) { return static_cast<int>(t); }

constexpr std::string_view name(TurnKind t) {
    constexpr std::string_view names[3] = {"left", "through", "right"};
    return names[idx(t)];
}

/// Turn classification for traffic approaching from side `approach` and
/// leaving through side `exit`. U-turns (exit == approach) are not modeled.
constexpr TurnKind turn_kind(Dir approach, Dir exit) {
    const Dir heading = opposite(approach);
    if (exit == heading) return TurnKind::Through;
    if (exit == right_of(heading)) return TurnKind::Right;
    if (exit == left_of(heading)) return TurnKind::Left;
    throw std::invalid_argument("turn_kind: u-turns are not modeled");
}

/// Exit side for traffic approaching from `approach` and performing `turn`.
constexpr Dir exit_side(Dir approach, TurnKind turn) {
    const Dir heading = opposite(approach);
    switch (turn) {
        case TurnKind::Through: return heading;
        case TurnKind::Right: return right_of(heading);
        case TurnKind::Left: return left_of(heading);
    }
    throw std::invalid_argument("exit_side: bad turn kind");
}

}  // namespace pqmp
