#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eifsim/types.hpp"

namespace eifsim {

enum class RoomLabel : std::uint8_t { Kitchen = 0, Bedroom = 1, Livingroom = 2, Bathroom = 3 };

const char* to_string(RoomLabel r);
bool room_label_from_string(const std::string& s, RoomLabel& out);

// Affordance bit flags.
inline constexpr std::uint8_t kPickupable = 1u << 0;
inline constexpr std::uint8_t kReceptacle = 1u << 1;
inline constexpr std::uint8_t kOpenable = 1u << 2;
inline constexpr std::uint8_t kToggleable = 1u << 3;
inline constexpr std::uint8_t kSliceable = 1u << 4;

inline constexpr std::uint8_t kRoomNeutral = 4;  // no room affinity

struct CategoryInfo {
    const char* name;
    std::uint8_t affordances;
    float height;        // vertical extent of the body, meters
    float shelf_offset;  // content base above body base when open (containers)
    std::uint8_t room;   // RoomLabel value or kRoomNeutral
    std::uint8_t fp_w;   // default footprint, motion-lattice blocks (floor furniture)
    std::uint8_t fp_h;
    bool floor_standing;
    bool blocking;       // occupies traversal cells
};

inline constexpr CategoryId kWallCategory = 1;

int category_count();                         // including Wall, excluding background 0
const CategoryInfo& category_info(CategoryId id);
const char* category_name(CategoryId id);
CategoryId category_id(const std::string& name);  // -1 if unknown
std::vector<CategoryId> all_categories();         // ids 1..count

inline bool has_affordance(CategoryId id, std::uint8_t flag) {
    return (category_info(id).affordances & flag) != 0;
}

}  // namespace eifsim
