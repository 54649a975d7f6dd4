#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "eifsim/goal.hpp"
#include "eifsim/taxonomy.hpp"
#include "eifsim/types.hpp"

namespace eifsim {

struct Room {
    int id = 0;
    RoomLabel label = RoomLabel::Kitchen;
    int x0 = 0, y0 = 0, w = 0, h = 0;  // interior rectangle, cells

    Cell center() const { return {x0 + w / 2, y0 + h / 2}; }
    bool contains(Cell c) const {
        return c.x >= x0 && c.y >= y0 && c.x < x0 + w && c.y < y0 + h;
    }
};

struct ObjectState {
    bool is_open = false;
    bool is_on = false;
    bool is_sliced = false;
    bool is_held = false;
    bool is_heated = false;

    friend bool operator==(const ObjectState&, const ObjectState&) = default;
};

struct ObjectInstance {
    ObjectId id = kNoObject;
    CategoryId category = -1;
    Cell pose;                      // anchor cell (low corner of footprint)
    Heading facing = Heading::North;
    int fp_w = 1, fp_h = 1;         // footprint, cells
    ObjectState state;
    ObjectId parent = kNoObject;    // receptacle this sits on / container it is in

    bool covers(Cell c) const {
        return c.x >= pose.x && c.y >= pose.y && c.x < pose.x + fp_w && c.y < pose.y + fp_h;
    }
    std::uint8_t affordances() const { return category_info(category).affordances; }
    bool has(std::uint8_t flag) const { return (affordances() & flag) != 0; }
};

struct EffectError {
    ActionPrimitive primitive;
    ObjectId target = kNoObject;
    std::string reason;
};

// World snapshot. Generation and apply_effect are the only producers; all
// other code treats a Scene as immutable. Copies are cheap: grids are shared,
// only the object list is deep.
struct Scene {
    int schema_version = 1;
    std::uint64_t seed = 0;
    SizeClass size_class = SizeClass::Small;
    double cell_size = 0.05;
    int width = 0, height = 0;  // cells

    std::vector<Room> rooms;
    std::vector<ObjectInstance> objects;
    std::shared_ptr<const std::vector<std::uint8_t>> walls;  // row-major width*height

    // -- queries ---------------------------------------------------------
    bool in_bounds(Cell c) const {
        return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height;
    }
    std::size_t idx(Cell c) const {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) +
               static_cast<std::size_t>(c.x);
    }
    bool wall_at(Cell c) const { return in_bounds(c) && (*walls)[idx(c)] != 0; }
    bool blocked(Cell c) const { return !in_bounds(c) || blocked_[idx(c)] != 0; }
    bool block_free(Cell block_center) const;  // full motion block around center is free

    const ObjectInstance* object(ObjectId id) const;
    ObjectInstance* mutable_object(ObjectId id);
    // Objects whose footprint covers the cell (render/index order).
    const std::vector<ObjectId>& occupants(Cell c) const;
    bool hidden(ObjectId id) const;  // inside some closed container up the parent chain
    std::vector<ObjectId> instances_of(CategoryId cat) const;
    const Room* room_at(Cell c) const;

    double distance_m(Cell a, Cell b) const { return cell_distance(a, b) * cell_size; }
    // Min distance from `from` to the footprint of `target`, meters.
    double object_distance_m(Cell from, ObjectId target) const;
    Cell nearest_footprint_cell(Cell from, ObjectId target) const;

    // Content slot model: block centers of a receptacle's footprint.
    std::vector<Cell> receptacle_slots(ObjectId id) const;

    // Rebuild derived indexes (occupancy, occupant lists). Must be called
    // after any direct mutation; generate_scene and apply_effect do so.
    void finalize();

    std::string serialize() const;  // canonical JSON
    static Scene deserialize(const std::string& json_text);

private:
    std::vector<std::uint8_t> blocked_;            // walls + blocking furniture
    std::unordered_map<ObjectId, int> id_index_;
    std::unordered_map<std::size_t, std::vector<ObjectId>> cell_objects_;
    static const std::vector<ObjectId> kNoOccupants;
};

struct ApplyResult {
    std::optional<Scene> scene;
    std::optional<EffectError> error;

    bool ok() const { return scene.has_value(); }
};

// State-transition semantics of the action primitives. Pure: returns a new
// snapshot, never mutates the input. `held` is the object currently carried
// by the agent (if any).
ApplyResult apply_effect(const Scene& scene, ActionPrimitive primitive, ObjectId target,
                         std::optional<ObjectId> held);

// Goal checking (per-conjunct existential over instances).
bool predicate_holds(const Scene& scene, const Predicate& p);
int count_satisfied(const Scene& scene, const GoalCondition& goal);
bool goal_satisfied(const Scene& scene, const GoalCondition& goal);

// Procedural generator. Pure function of (seed, size_class); retries
// internally until all structural constraints hold.
Scene generate_scene(std::uint64_t seed, SizeClass size_class);

}  // namespace eifsim
