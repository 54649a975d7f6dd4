#pragma once

#include <cstdint>
#include <cmath>
#include <compare>
#include <functional>
#include <string>

namespace eifsim {

using ObjectId = std::int32_t;
using CategoryId = std::int32_t;

inline constexpr ObjectId kNoObject = -1;
inline constexpr ObjectId kBackgroundId = 0;
inline constexpr ObjectId kWallInstanceId = 1;
inline constexpr ObjectId kFirstObjectId = 2;

// Motion lattice: the agent translates in strides of kBlockCells map cells
// (0.25 m at the default 0.05 m cell size). Scene structure is aligned to
// this lattice so every Forward either fully succeeds or is blocked.
inline constexpr int kBlockCells = 5;

struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline double cell_distance(Cell a, Cell b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

inline int manhattan(Cell a, Cell b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

// Heading as quarter turns; degrees = heading * 90.
enum class Heading : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

inline Cell heading_dir(Heading h) {
    switch (h) {
        case Heading::North: return {0, 1};
        case Heading::East: return {1, 0};
        case Heading::South: return {0, -1};
        case Heading::West: return {-1, 0};
    }
    return {0, 1};
}

inline Heading rotate_left(Heading h) {
    return static_cast<Heading>((static_cast<int>(h) + 3) & 3);
}

inline Heading rotate_right(Heading h) {
    return static_cast<Heading>((static_cast<int>(h) + 1) & 3);
}

inline int heading_degrees(Heading h) { return static_cast<int>(h) * 90; }

enum class ActionPrimitive : std::uint8_t {
    Navigate,
    PickUp,
    Place,
    Open,
    Close,
    ToggleOn,
    ToggleOff,
    Slice,
};

enum class MotionCmd : std::uint8_t { Forward, RotateLeft, RotateRight };

const char* to_string(ActionPrimitive p);
const char* to_string(MotionCmd c);
bool primitive_from_string(const std::string& s, ActionPrimitive& out);
bool motion_from_string(const std::string& s, MotionCmd& out);

enum class SizeClass : std::uint8_t { Small, Large };

inline const char* to_string(SizeClass s) {
    return s == SizeClass::Small ? "small" : "large";
}

struct CellHash {
    std::size_t operator()(const Cell& c) const noexcept {
        return std::hash<std::uint64_t>{}(
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.x)) << 32) |
            static_cast<std::uint32_t>(c.y));
    }
};

}  // namespace eifsim
