#include "eifsim/scene.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "eifsim/rng.hpp"

namespace eifsim {

using json = nlohmann::json;

const std::vector<ObjectId> Scene::kNoOccupants{};

// ---------------------------------------------------------------------------
// Scene queries

const ObjectInstance* Scene::object(ObjectId id) const {
    auto it = id_index_.find(id);
    return it == id_index_.end() ? nullptr : &objects[static_cast<std::size_t>(it->second)];
}

ObjectInstance* Scene::mutable_object(ObjectId id) {
    auto it = id_index_.find(id);
    return it == id_index_.end() ? nullptr : &objects[static_cast<std::size_t>(it->second)];
}

const std::vector<ObjectId>& Scene::occupants(Cell c) const {
    if (!in_bounds(c)) return kNoOccupants;
    auto it = cell_objects_.find(idx(c));
    return it == cell_objects_.end() ? kNoOccupants : it->second;
}

bool Scene::hidden(ObjectId id) const {
    const ObjectInstance* obj = object(id);
    int hops = 0;
    while (obj && obj->parent != kNoObject && hops++ < 16) {
        const ObjectInstance* parent = object(obj->parent);
        if (!parent) break;
        if (parent->has(kOpenable) && category_info(parent->category).shelf_offset > 0.0f &&
            !parent->state.is_open)
            return true;
        obj = parent;
    }
    return false;
}

std::vector<ObjectId> Scene::instances_of(CategoryId cat) const {
    std::vector<ObjectId> out;
    for (const auto& o : objects)
        if (o.category == cat) out.push_back(o.id);
    return out;
}

const Room* Scene::room_at(Cell c) const {
    for (const auto& r : rooms)
        if (r.contains(c)) return &r;
    return nullptr;
}

double Scene::object_distance_m(Cell from, ObjectId target) const {
    const ObjectInstance* obj = object(target);
    if (!obj) return 1e9;
    return distance_m(from, nearest_footprint_cell(from, target));
}

Cell Scene::nearest_footprint_cell(Cell from, ObjectId target) const {
    const ObjectInstance* obj = object(target);
    if (!obj) return from;
    Cell best = obj->pose;
    double best_d = 1e18;
    for (int dy = 0; dy < obj->fp_h; ++dy)
        for (int dx = 0; dx < obj->fp_w; ++dx) {
            Cell c{obj->pose.x + dx, obj->pose.y + dy};
            const double d = cell_distance(from, c);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
    return best;
}

std::vector<Cell> Scene::receptacle_slots(ObjectId id) const {
    const ObjectInstance* obj = object(id);
    std::vector<Cell> slots;
    if (!obj) return slots;
    if (obj->fp_w < kBlockCells || obj->fp_h < kBlockCells) {
        slots.push_back(obj->pose);
        return slots;
    }
    for (int by = 0; by + kBlockCells <= obj->fp_h; by += kBlockCells)
        for (int bx = 0; bx + kBlockCells <= obj->fp_w; bx += kBlockCells)
            slots.push_back({obj->pose.x + bx + kBlockCells / 2, obj->pose.y + by + kBlockCells / 2});
    return slots;
}

bool Scene::block_free(Cell block_center) const {
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx)
            if (blocked({block_center.x + dx, block_center.y + dy})) return false;
    return true;
}

void Scene::finalize() {
    blocked_ = *walls;
    id_index_.clear();
    cell_objects_.clear();
    for (std::size_t i = 0; i < objects.size(); ++i) {
        const ObjectInstance& o = objects[i];
        id_index_[o.id] = static_cast<int>(i);
        if (o.state.is_held) continue;  // carried objects have no world footprint
        const bool blocks = category_info(o.category).blocking;
        for (int dy = 0; dy < o.fp_h; ++dy)
            for (int dx = 0; dx < o.fp_w; ++dx) {
                Cell c{o.pose.x + dx, o.pose.y + dy};
                if (!in_bounds(c)) continue;
                cell_objects_[idx(c)].push_back(o.id);
                if (blocks) blocked_[idx(c)] = 1;
            }
    }
}

// ---------------------------------------------------------------------------
// Action-primitive semantics

namespace {

ApplyResult fail(ActionPrimitive p, ObjectId target, std::string reason) {
    return ApplyResult{std::nullopt, EffectError{p, target, std::move(reason)}};
}

// Deterministic content slot: first footprint slot with the fewest resident
// items, scan order as tie-break.
Cell place_slot(const Scene& s, ObjectId receptacle, ObjectId placing) {
    const std::vector<Cell> slots = s.receptacle_slots(receptacle);
    Cell best = slots.front();
    int best_count = 1 << 30;
    for (const Cell& slot : slots) {
        int count = 0;
        for (const auto& o : s.objects)
            if (o.id != placing && o.parent == receptacle && !o.state.is_held && o.pose == slot)
                ++count;
        if (count < best_count) {
            best_count = count;
            best = slot;
            if (count == 0) break;
        }
    }
    return best;
}

}  // namespace

ApplyResult apply_effect(const Scene& scene, ActionPrimitive primitive, ObjectId target,
                         std::optional<ObjectId> held) {
    const ObjectInstance* tgt = scene.object(target);
    if (!tgt) return fail(primitive, target, "no_such_object");
    const ObjectInstance* held_obj = held ? scene.object(*held) : nullptr;
    if (held && !held_obj) return fail(primitive, target, "no_such_held_object");

    if (primitive != ActionPrimitive::Close && scene.hidden(target))
        return fail(primitive, target, "inside_closed_container");

    Scene next = scene;
    ObjectInstance* t = next.mutable_object(target);

    switch (primitive) {
        case ActionPrimitive::Navigate:
            return fail(primitive, target, "navigate_has_no_effect");
        case ActionPrimitive::PickUp: {
            if (!t->has(kPickupable)) return fail(primitive, target, "not_pickupable");
            if (t->state.is_held) return fail(primitive, target, "already_held");
            if (held) return fail(primitive, target, "hands_full");
            t->state.is_held = true;
            t->parent = kNoObject;
            break;
        }
        case ActionPrimitive::Place: {
            if (!held) return fail(primitive, target, "nothing_held");
            if (!t->has(kReceptacle)) return fail(primitive, target, "not_receptacle");
            if (t->state.is_held) return fail(primitive, target, "target_held");
            if (t->has(kOpenable) && category_info(t->category).shelf_offset > 0.0f &&
                !t->state.is_open)
                return fail(primitive, target, "container_closed");
            ObjectInstance* h = next.mutable_object(*held);
            h->state.is_held = false;
            h->parent = target;
            h->pose = place_slot(next, target, *held);
            break;
        }
        case ActionPrimitive::Open: {
            if (!t->has(kOpenable)) return fail(primitive, target, "not_openable");
            if (t->state.is_open) return fail(primitive, target, "already_open");
            t->state.is_open = true;
            break;
        }
        case ActionPrimitive::Close: {
            if (!t->has(kOpenable)) return fail(primitive, target, "not_openable");
            if (!t->state.is_open) return fail(primitive, target, "already_closed");
            t->state.is_open = false;
            break;
        }
        case ActionPrimitive::ToggleOn: {
            if (!t->has(kToggleable)) return fail(primitive, target, "not_toggleable");
            if (t->state.is_on) return fail(primitive, target, "already_on");
            t->state.is_on = true;
            if (t->category == category_id("Microwave"))
                for (auto& o : next.objects)
                    if (o.parent == target) o.state.is_heated = true;
            break;
        }
        case ActionPrimitive::ToggleOff: {
            if (!t->has(kToggleable)) return fail(primitive, target, "not_toggleable");
            if (!t->state.is_on) return fail(primitive, target, "already_off");
            t->state.is_on = false;
            break;
        }
        case ActionPrimitive::Slice: {
            if (!t->has(kSliceable)) return fail(primitive, target, "not_sliceable");
            if (t->state.is_sliced) return fail(primitive, target, "already_sliced");
            if (t->state.is_held) return fail(primitive, target, "target_held");
            if (!held_obj || held_obj->category != category_id("Knife"))
                return fail(primitive, target, "no_knife_held");
            t->state.is_sliced = true;
            break;
        }
    }

    next.finalize();
    return ApplyResult{std::move(next), std::nullopt};
}

// ---------------------------------------------------------------------------
// Goal checking

namespace {

bool contained_in(const Scene& s, const ObjectInstance& inner, ObjectId outer) {
    ObjectId p = inner.parent;
    int hops = 0;
    while (p != kNoObject && hops++ < 16) {
        if (p == outer) return true;
        const ObjectInstance* po = s.object(p);
        if (!po) return false;
        p = po->parent;
    }
    return false;
}

}  // namespace

bool predicate_holds(const Scene& scene, const Predicate& p) {
    switch (p.kind) {
        case PredicateKind::Sliced:
            for (const auto& o : scene.objects)
                if (o.category == p.a && o.state.is_sliced) return true;
            return false;
        case PredicateKind::Open:
            for (const auto& o : scene.objects)
                if (o.category == p.a && o.state.is_open) return true;
            return false;
        case PredicateKind::Closed:
            for (const auto& o : scene.objects)
                if (o.category == p.a && o.has(kOpenable) && !o.state.is_open) return true;
            return false;
        case PredicateKind::On:
            for (const auto& o : scene.objects)
                if (o.category == p.a && o.state.is_on) return true;
            return false;
        case PredicateKind::Off:
            for (const auto& o : scene.objects)
                if (o.category == p.a && o.has(kToggleable) && !o.state.is_on) return true;
            return false;
        case PredicateKind::Held:
            for (const auto& o : scene.objects)
                if (o.category == p.a && o.state.is_held) return true;
            return false;
        case PredicateKind::Heated:
            for (const auto& o : scene.objects)
                if (o.category == p.a && o.state.is_heated) return true;
            return false;
        case PredicateKind::In:
            for (const auto& inner : scene.objects) {
                if (inner.category != p.a || inner.state.is_held) continue;
                for (const auto& outer : scene.objects)
                    if (outer.category == p.b && contained_in(scene, inner, outer.id)) return true;
            }
            return false;
    }
    return false;
}

int count_satisfied(const Scene& scene, const GoalCondition& goal) {
    int n = 0;
    for (const auto& p : goal.conjuncts)
        if (predicate_holds(scene, p)) ++n;
    return n;
}

bool goal_satisfied(const Scene& scene, const GoalCondition& goal) {
    return count_satisfied(scene, goal) == static_cast<int>(goal.conjuncts.size());
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string rle_encode(const std::vector<std::uint8_t>& grid) {
    std::string out;
    std::size_t i = 0;
    while (i < grid.size()) {
        std::size_t j = i;
        while (j < grid.size() && grid[j] == grid[i]) ++j;
        if (!out.empty()) out += ',';
        out += std::to_string(j - i);
        out += '*';
        out += grid[i] ? '1' : '0';
        i = j;
    }
    return out;
}

std::vector<std::uint8_t> rle_decode(const std::string& text, std::size_t expected) {
    std::vector<std::uint8_t> grid;
    grid.reserve(expected);
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t star = text.find('*', pos);
        if (star == std::string::npos) throw std::invalid_argument("bad RLE grid");
        const std::size_t count = std::stoull(text.substr(pos, star - pos));
        const char v = text[star + 1];
        grid.insert(grid.end(), count, v == '1' ? 1 : 0);
        pos = star + 2;
        if (pos < text.size() && text[pos] == ',') ++pos;
    }
    if (grid.size() != expected) throw std::invalid_argument("RLE grid size mismatch");
    return grid;
}

}  // namespace

std::string Scene::serialize() const {
    json j;
    j["schema_version"] = schema_version;
    j["seed"] = seed;
    j["size_class"] = to_string(size_class);
    j["cell_size"] = cell_size;
    j["width"] = width;
    j["height"] = height;
    json jr = json::array();
    for (const auto& r : rooms)
        jr.push_back({{"id", r.id},
                      {"label", to_string(r.label)},
                      {"x", r.x0},
                      {"y", r.y0},
                      {"w", r.w},
                      {"h", r.h}});
    j["rooms"] = jr;
    json jo = json::array();
    json containment = json::object();
    for (const auto& o : objects) {
        jo.push_back({{"id", o.id},
                      {"category", category_name(o.category)},
                      {"x", o.pose.x},
                      {"y", o.pose.y},
                      {"facing", static_cast<int>(o.facing)},
                      {"fp_w", o.fp_w},
                      {"fp_h", o.fp_h},
                      {"state",
                       {{"open", o.state.is_open},
                        {"on", o.state.is_on},
                        {"sliced", o.state.is_sliced},
                        {"held", o.state.is_held},
                        {"heated", o.state.is_heated}}}});
        if (o.parent != kNoObject) containment[std::to_string(o.id)] = o.parent;
    }
    j["objects"] = jo;
    j["containment"] = containment;
    j["walls_rle"] = rle_encode(*walls);
    return j.dump();
}

Scene Scene::deserialize(const std::string& text) {
    const json j = json::parse(text);
    Scene s;
    s.schema_version = j.at("schema_version").get<int>();
    if (s.schema_version != 1)
        throw std::invalid_argument("unsupported scene schema version");
    s.seed = j.at("seed").get<std::uint64_t>();
    std::string sc = j.at("size_class").get<std::string>();
    s.size_class = sc == "large" ? SizeClass::Large : SizeClass::Small;
    s.cell_size = j.at("cell_size").get<double>();
    s.width = j.at("width").get<int>();
    s.height = j.at("height").get<int>();
    for (const auto& jr : j.at("rooms")) {
        Room r;
        r.id = jr.at("id").get<int>();
        room_label_from_string(jr.at("label").get<std::string>(), r.label);
        r.x0 = jr.at("x").get<int>();
        r.y0 = jr.at("y").get<int>();
        r.w = jr.at("w").get<int>();
        r.h = jr.at("h").get<int>();
        s.rooms.push_back(r);
    }
    for (const auto& jo : j.at("objects")) {
        ObjectInstance o;
        o.id = jo.at("id").get<ObjectId>();
        o.category = category_id(jo.at("category").get<std::string>());
        if (o.category < 0) throw std::invalid_argument("unknown category in scene file");
        o.pose = {jo.at("x").get<int>(), jo.at("y").get<int>()};
        o.facing = static_cast<Heading>(jo.at("facing").get<int>() & 3);
        o.fp_w = jo.at("fp_w").get<int>();
        o.fp_h = jo.at("fp_h").get<int>();
        const auto& st = jo.at("state");
        o.state.is_open = st.at("open").get<bool>();
        o.state.is_on = st.at("on").get<bool>();
        o.state.is_sliced = st.at("sliced").get<bool>();
        o.state.is_held = st.at("held").get<bool>();
        o.state.is_heated = st.at("heated").get<bool>();
        s.objects.push_back(o);
    }
    for (auto it = j.at("containment").begin(); it != j.at("containment").end(); ++it) {
        ObjectId child = static_cast<ObjectId>(std::stol(it.key()));
        for (auto& o : s.objects)
            if (o.id == child) o.parent = it.value().get<ObjectId>();
    }
    const std::size_t n = static_cast<std::size_t>(s.width) * static_cast<std::size_t>(s.height);
    s.walls = std::make_shared<const std::vector<std::uint8_t>>(
        rle_decode(j.at("walls_rle").get<std::string>(), n));
    s.finalize();
    return s;
}

// ---------------------------------------------------------------------------
// Procedural generation

namespace {

struct BlockRect {  // block coordinates
    int x = 0, y = 0, w = 0, h = 0;
    bool splittable(int min_side) const { return w >= 2 * min_side + 1 || h >= 2 * min_side + 1; }
};

struct GenState {
    int wb = 0, hb = 0;  // house size, blocks
    std::vector<std::uint8_t> wallb;          // block-level wall grid
    std::vector<BlockRect> regions;           // room interiors
    std::vector<RoomLabel> labels;
    std::vector<std::uint8_t> furniture;      // block-level furniture occupancy
    std::vector<Cell> door_blocks;

    std::size_t bidx(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(wb) +
               static_cast<std::size_t>(x);
    }
    bool wall_b(int x, int y) const {
        return x < 0 || y < 0 || x >= wb || y >= hb || wallb[bidx(x, y)] != 0;
    }
};

constexpr int kMinRoomSide = 8;  // blocks (2 m)

bool split_regions(GenState& g, SplitMix64& rng, int target) {
    while (static_cast<int>(g.regions.size()) < target) {
        int best = -1;
        int best_area = -1;
        for (std::size_t i = 0; i < g.regions.size(); ++i) {
            const auto& r = g.regions[i];
            if (!r.splittable(kMinRoomSide)) continue;
            if (r.w * r.h > best_area) {
                best_area = r.w * r.h;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) return false;
        BlockRect r = g.regions[static_cast<std::size_t>(best)];
        const bool vertical = (r.w > r.h) || (r.w == r.h && rng.next() % 2 == 0);
        if (vertical && r.w < 2 * kMinRoomSide + 1) return false;
        if (!vertical && r.h < 2 * kMinRoomSide + 1) return false;
        if (vertical) {
            const int p = rng.uniform_int(kMinRoomSide, r.w - kMinRoomSide - 1);
            for (int y = r.y; y < r.y + r.h; ++y) g.wallb[g.bidx(r.x + p, y)] = 1;
            g.regions[static_cast<std::size_t>(best)] = {r.x, r.y, p, r.h};
            g.regions.push_back({r.x + p + 1, r.y, r.w - p - 1, r.h});
        } else {
            const int p = rng.uniform_int(kMinRoomSide, r.h - kMinRoomSide - 1);
            for (int x = r.x; x < r.x + r.w; ++x) g.wallb[g.bidx(x, r.y + p)] = 1;
            g.regions[static_cast<std::size_t>(best)] = {r.x, r.y, r.w, p};
            g.regions.push_back({r.x, r.y + p + 1, r.w, r.h - p - 1});
        }
    }
    return true;
}

struct Adjacency {
    int a, b;                       // region indexes
    std::vector<Cell> wall_blocks;  // candidate door blocks on the shared wall
};

std::vector<Adjacency> find_adjacencies(const GenState& g) {
    std::vector<Adjacency> adj;
    for (std::size_t i = 0; i < g.regions.size(); ++i)
        for (std::size_t k = i + 1; k < g.regions.size(); ++k) {
            const auto& a = g.regions[i];
            const auto& b = g.regions[k];
            std::vector<Cell> shared;
            // Vertical wall between horizontally adjacent regions.
            if (a.x + a.w + 1 == b.x || b.x + b.w + 1 == a.x) {
                const int wall_x = a.x + a.w + 1 == b.x ? a.x + a.w : b.x + b.w;
                const int y0 = std::max(a.y, b.y);
                const int y1 = std::min(a.y + a.h, b.y + b.h);
                for (int y = y0; y < y1; ++y) shared.push_back({wall_x, y});
            }
            if (a.y + a.h + 1 == b.y || b.y + b.h + 1 == a.y) {
                const int wall_y = a.y + a.h + 1 == b.y ? a.y + a.h : b.y + b.h;
                const int x0 = std::max(a.x, b.x);
                const int x1 = std::min(a.x + a.w, b.x + b.w);
                for (int x = x0; x < x1; ++x) shared.push_back({x, wall_y});
            }
            if (!shared.empty())
                adj.push_back({static_cast<int>(i), static_cast<int>(k), std::move(shared)});
        }
    return adj;
}

bool carve_doors(GenState& g, SplitMix64& rng) {
    std::vector<Adjacency> adj = find_adjacencies(g);
    if (adj.empty() && g.regions.size() > 1) return false;

    // Union-find over regions; carve along a random spanning structure plus
    // occasional extra doors for loops.
    std::vector<int> parent(g.regions.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
        return x;
    };

    rng.shuffle(adj);
    for (const auto& e : adj) {
        const bool connects = find(e.a) != find(e.b);
        const bool extra = rng.next01() < 0.3;
        if (!connects && !extra) continue;
        const int door_w = rng.uniform_int(4, 6);  // blocks: 1.0 - 1.5 m openings
        if (static_cast<int>(e.wall_blocks.size()) < door_w + 2) {
            if (connects) return false;
            continue;
        }
        const int start = rng.uniform_int(1, static_cast<int>(e.wall_blocks.size()) - door_w - 1);
        for (int i = 0; i < door_w; ++i) {
            const Cell c = e.wall_blocks[static_cast<std::size_t>(start + i)];
            g.wallb[g.bidx(c.x, c.y)] = 0;
            g.door_blocks.push_back(c);
        }
        if (connects) parent[static_cast<std::size_t>(find(e.a))] = find(e.b);
    }
    for (std::size_t i = 1; i < g.regions.size(); ++i)
        if (find(0) != find(static_cast<int>(i))) return false;
    return true;
}

// Furniture placement bookkeeping in block coordinates.
struct Placement {
    CategoryId cat;
    int bx, by, bw, bh;  // blocks
    Heading facing;
};

bool door_adjacent(const GenState& g, int bx, int by) {
    for (const Cell& d : g.door_blocks)
        if (std::abs(d.x - bx) + std::abs(d.y - by) <= 1) return true;
    return false;
}

bool region_center_hit(const BlockRect& r, int bx, int by, int bw, int bh) {
    const int cx = r.x + r.w / 2;
    const int cy = r.y + r.h / 2;
    return bx <= cx && cx < bx + bw && by <= cy && cy < by + bh;
}

bool try_place_against_wall(GenState& g, SplitMix64& rng, const BlockRect& room, CategoryId cat,
                            int bw, int bh, std::vector<Placement>& out) {
    // bw x bh given with bw = extent along the wall.
    for (int attempt = 0; attempt < 24; ++attempt) {
        const int side = rng.uniform_int(0, 3);  // 0:N(top y max) 1:E 2:S 3:W
        int w = bw, h = bh;
        if (side == 1 || side == 3) std::swap(w, h);
        if (w > room.w || h > room.h) continue;
        int bx, by;
        Heading facing;
        if (side == 0) {  // against y-max wall, facing -y
            by = room.y + room.h - h;
            bx = room.x + rng.uniform_int(0, room.w - w);
            facing = Heading::South;
        } else if (side == 2) {
            by = room.y;
            bx = room.x + rng.uniform_int(0, room.w - w);
            facing = Heading::North;
        } else if (side == 1) {
            bx = room.x + room.w - w;
            by = room.y + rng.uniform_int(0, room.h - h);
            facing = Heading::West;
        } else {
            bx = room.x;
            by = room.y + rng.uniform_int(0, room.h - h);
            facing = Heading::East;
        }
        bool ok = !region_center_hit(room, bx, by, w, h);
        // keep the row in front of the furniture free (approach clearance)
        const Cell fd = heading_dir(facing);
        for (int dy = 0; ok && dy < h; ++dy)
            for (int dx = 0; ok && dx < w; ++dx) {
                const int x = bx + dx, y = by + dy;
                if (g.furniture[g.bidx(x, y)] || door_adjacent(g, x, y)) ok = false;
            }
        for (int i = 0; ok && i < std::max(w, h); ++i) {
            const int fx = (fd.x != 0) ? (fd.x > 0 ? bx + w : bx - 1) : bx + std::min(i, w - 1);
            const int fy = (fd.y != 0) ? (fd.y > 0 ? by + h : by - 1) : by + std::min(i, h - 1);
            if (fx < room.x || fy < room.y || fx >= room.x + room.w || fy >= room.y + room.h ||
                g.furniture[g.bidx(fx, fy)] || region_center_hit(room, fx, fy, 1, 1))
                ok = false;
        }
        if (!ok) continue;
        for (int dy = 0; dy < h; ++dy)
            for (int dx = 0; dx < w; ++dx) g.furniture[g.bidx(bx + dx, by + dy)] = 1;
        out.push_back({cat, bx, by, w, h, facing});
        return true;
    }
    return false;
}

struct ItemSpec {
    CategoryId cat;
    ObjectId parent;
    Cell pose;  // cells
};

// Per-receptacle slot occupancy during generation.
struct SurfaceSlots {
    ObjectId id;
    CategoryId cat;
    std::vector<Cell> slots;
    std::vector<bool> used;
};

}  // namespace

Scene generate_scene(std::uint64_t seed, SizeClass size_class) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(size_class) + 1,
                                static_cast<std::uint64_t>(attempt)));
        GenState g;
        if (size_class == SizeClass::Small) {
            g.wb = rng.uniform_int(26, 40);
            g.hb = rng.uniform_int(26, 40);
        } else {
            g.wb = rng.uniform_int(42, 64);
            g.hb = rng.uniform_int(42, 64);
        }
        g.wallb.assign(static_cast<std::size_t>(g.wb) * static_cast<std::size_t>(g.hb), 0);
        for (int x = 0; x < g.wb; ++x) {
            g.wallb[g.bidx(x, 0)] = 1;
            g.wallb[g.bidx(x, g.hb - 1)] = 1;
        }
        for (int y = 0; y < g.hb; ++y) {
            g.wallb[g.bidx(0, y)] = 1;
            g.wallb[g.bidx(g.wb - 1, y)] = 1;
        }
        g.regions.push_back({1, 1, g.wb - 2, g.hb - 2});

        const int target_rooms = size_class == SizeClass::Small ? rng.uniform_int(2, 4)
                                                                : rng.uniform_int(3, 6);
        if (!split_regions(g, rng, target_rooms)) continue;
        if (!carve_doors(g, rng)) continue;

        // Room labels: exactly one kitchen, fill the rest.
        g.labels.assign(g.regions.size(), RoomLabel::Livingroom);
        const int kitchen_idx = rng.uniform_int(0, static_cast<int>(g.regions.size()) - 1);
        const RoomLabel others[3] = {RoomLabel::Livingroom, RoomLabel::Bedroom,
                                     RoomLabel::Bathroom};
        int next_other = 0;
        for (std::size_t i = 0; i < g.regions.size(); ++i) {
            if (static_cast<int>(i) == kitchen_idx) {
                g.labels[i] = RoomLabel::Kitchen;
            } else {
                g.labels[i] = others[next_other % 3];
                ++next_other;
            }
        }

        // Furniture.
        g.furniture.assign(g.wallb.size(), 0);
        std::vector<Placement> placements;
        std::vector<std::pair<int, Placement>> room_of;  // region index per placement
        bool ok = true;
        for (std::size_t i = 0; i < g.regions.size() && ok; ++i) {
            const BlockRect& room = g.regions[i];
            auto place = [&](const char* name, int bw, int bh, bool mandatory) {
                if (!ok) return false;
                const CategoryId cat = category_id(name);
                const std::size_t before = placements.size();
                const bool placed = try_place_against_wall(g, rng, room, cat, bw, bh, placements);
                if (placed) room_of.push_back({static_cast<int>(i), placements[before]});
                if (!placed && mandatory) ok = false;
                return placed;
            };
            switch (g.labels[i]) {
                case RoomLabel::Kitchen: {
                    place("Fridge", 2, 2, true);
                    place("CounterTop", rng.uniform_int(3, 4), 1, true);
                    place("Sink", 2, 1, true);
                    place("DiningTable", 3, 2, false);
                    place("Cabinet", 2, 1, false);
                    place("GarbageCan", 1, 1, false);
                    break;
                }
                case RoomLabel::Livingroom: {
                    place("Sofa", 4, 2, true);
                    place("TVStand", 3, 1, true);
                    place("CoffeeTable", 2, 2, false);
                    place("Shelf", 2, 1, false);
                    place("FloorLamp", 1, 1, false);
                    break;
                }
                case RoomLabel::Bedroom: {
                    place("Bed", 3, 4, true);
                    place("Dresser", 2, 1, true);
                    place("SideTable", 1, 1, false);
                    break;
                }
                case RoomLabel::Bathroom: {
                    place("Toilet", 1, 1, true);
                    place("Bathtub", 4, 2, true);
                    place("Cabinet", 2, 1, false);
                    place("GarbageCan", 1, 1, false);
                    break;
                }
            }
        }
        if (!ok) continue;

        // Expand to cells.
        Scene s;
        s.seed = seed;
        s.size_class = size_class;
        s.width = g.wb * kBlockCells;
        s.height = g.hb * kBlockCells;
        auto walls = std::make_shared<std::vector<std::uint8_t>>(
            static_cast<std::size_t>(s.width) * static_cast<std::size_t>(s.height), 0);
        for (int by = 0; by < g.hb; ++by)
            for (int bx = 0; bx < g.wb; ++bx) {
                if (!g.wallb[g.bidx(bx, by)]) continue;
                for (int dy = 0; dy < kBlockCells; ++dy)
                    for (int dx = 0; dx < kBlockCells; ++dx)
                        (*walls)[static_cast<std::size_t>(by * kBlockCells + dy) *
                                     static_cast<std::size_t>(s.width) +
                                 static_cast<std::size_t>(bx * kBlockCells + dx)] = 1;
            }
        s.walls = walls;
        for (std::size_t i = 0; i < g.regions.size(); ++i) {
            Room r;
            r.id = static_cast<int>(i);
            r.label = g.labels[i];
            r.x0 = g.regions[i].x * kBlockCells;
            r.y0 = g.regions[i].y * kBlockCells;
            r.w = g.regions[i].w * kBlockCells;
            r.h = g.regions[i].h * kBlockCells;
            s.rooms.push_back(r);
        }

        ObjectId next_id = kFirstObjectId;
        std::vector<SurfaceSlots> surfaces;
        for (const auto& [region_idx, p] : room_of) {
            ObjectInstance o;
            o.id = next_id++;
            o.category = p.cat;
            o.pose = {p.bx * kBlockCells, p.by * kBlockCells};
            o.fp_w = p.bw * kBlockCells;
            o.fp_h = p.bh * kBlockCells;
            o.facing = p.facing;
            s.objects.push_back(o);
        }
        s.finalize();
        for (const auto& o : s.objects)
            if (o.has(kReceptacle)) {
                SurfaceSlots ss;
                ss.id = o.id;
                ss.cat = o.category;
                ss.slots = s.receptacle_slots(o.id);
                ss.used.assign(ss.slots.size(), false);
                surfaces.push_back(ss);
            }

        auto surface_in_room = [&](int region_idx, CategoryId cat) -> SurfaceSlots* {
            const Room& r = s.rooms[static_cast<std::size_t>(region_idx)];
            for (auto& ss : surfaces) {
                if (cat >= 0 && ss.cat != cat) continue;
                const ObjectInstance* o = s.object(ss.id);
                if (!r.contains(o->pose)) continue;
                if (std::find(ss.used.begin(), ss.used.end(), false) != ss.used.end()) return &ss;
            }
            return nullptr;
        };
        auto take_slot = [&](SurfaceSlots& ss, SplitMix64& r) -> Cell {
            std::vector<int> free_idx;
            for (std::size_t k = 0; k < ss.used.size(); ++k)
                if (!ss.used[k]) free_idx.push_back(static_cast<int>(k));
            const int pick = free_idx[static_cast<std::size_t>(r.uniform(free_idx.size()))];
            ss.used[static_cast<std::size_t>(pick)] = true;
            return ss.slots[static_cast<std::size_t>(pick)];
        };
        auto add_item = [&](CategoryId cat, SurfaceSlots& ss, int fp_cells) {
            const Cell slot = take_slot(ss, rng);
            ObjectInstance o;
            o.id = next_id++;
            o.category = cat;
            o.fp_w = fp_cells;
            o.fp_h = fp_cells;
            o.pose = {slot.x - fp_cells / 2, slot.y - fp_cells / 2};
            o.parent = ss.id;
            s.objects.push_back(o);
        };

        // Items per room.
        ok = true;
        int kitchen_region = -1;
        for (std::size_t i = 0; i < g.regions.size(); ++i)
            if (g.labels[i] == RoomLabel::Kitchen) kitchen_region = static_cast<int>(i);
        {
            const int kr = kitchen_region;
            SurfaceSlots* counter = surface_in_room(kr, category_id("CounterTop"));
            SurfaceSlots* fridge = surface_in_room(kr, category_id("Fridge"));
            if (!counter || !fridge) {
                ok = false;
            } else {
                add_item(category_id("Microwave"), *counter, 3);
                auto pick_surface = [&](double counter_bias) -> SurfaceSlots* {
                    SurfaceSlots* c = surface_in_room(kr, category_id("CounterTop"));
                    SurfaceSlots* t = surface_in_room(kr, category_id("DiningTable"));
                    if (c && (rng.next01() < counter_bias || !t)) return c;
                    if (t) return t;
                    if (c) return c;
                    return surface_in_room(kr, -1);
                };
                auto must_add = [&](CategoryId cat, SurfaceSlots* dst) {
                    if (dst) add_item(cat, *dst, 1);
                    else ok = false;
                };
                must_add(category_id("Knife"), pick_surface(0.7));
                must_add(category_id("Tomato"), pick_surface(0.6));
                must_add(category_id("Lettuce"), surface_in_room(kr, category_id("Fridge")));
                must_add(category_id("Mug"), pick_surface(0.5));
                SurfaceSlots* sbowl = pick_surface(0.5);
                if (sbowl) add_item(rng.next01() < 0.5 ? category_id("Bowl") : category_id("Plate"),
                                    *sbowl, 1);
                const char* extras[] = {"Potato", "Apple", "Bread",      "Onion",
                                        "Carrot", "Fork",  "Spoon",      "Cup",
                                        "Pan",    "Pot",   "SaltShaker", "DishSponge"};
                const int n_extras = rng.uniform_int(2, 5);
                for (int e = 0; e < n_extras; ++e) {
                    const CategoryId cat =
                        category_id(extras[rng.uniform(sizeof(extras) / sizeof(extras[0]))]);
                    SurfaceSlots* dst = nullptr;
                    const double roll = rng.next01();
                    if (roll < 0.25)
                        dst = surface_in_room(kr, category_id("Fridge"));
                    else if (roll < 0.4)
                        dst = surface_in_room(kr, category_id("Cabinet"));
                    if (!dst) dst = pick_surface(0.6);
                    if (dst) add_item(cat, *dst, 1);
                }
                if (rng.next01() < 0.5) {
                    SurfaceSlots* dst = pick_surface(0.5);
                    if (dst) add_item(category_id("Bottle"), *dst, 1);
                }
            }
        }
        for (std::size_t i = 0; i < g.regions.size() && ok; ++i) {
            if (static_cast<int>(i) == kitchen_region) continue;
            const int ri = static_cast<int>(i);
            switch (g.labels[i]) {
                case RoomLabel::Livingroom: {
                    SurfaceSlots* tv = surface_in_room(ri, category_id("TVStand"));
                    if (tv) add_item(category_id("Television"), *tv, 3);
                    const char* pool[] = {"RemoteControl", "Book",   "Laptop", "Newspaper",
                                          "Vase",          "Statue", "Pillow", "CellPhone",
                                          "KeyChain",      "TissueBox"};
                    const int n = rng.uniform_int(2, 4);
                    for (int e = 0; e < n; ++e) {
                        SurfaceSlots* dst = surface_in_room(ri, -1);
                        if (dst)
                            add_item(category_id(pool[rng.uniform(sizeof(pool) / sizeof(pool[0]))]),
                                     *dst, 1);
                    }
                    break;
                }
                case RoomLabel::Bedroom: {
                    SurfaceSlots* side = surface_in_room(ri, category_id("SideTable"));
                    if (side) add_item(category_id("DeskLamp"), *side, 2);
                    SurfaceSlots* bed = surface_in_room(ri, category_id("Bed"));
                    if (bed) add_item(category_id("Pillow"), *bed, 1);
                    const char* pool[] = {"AlarmClock", "Book", "CellPhone", "Watch", "Pen"};
                    const int n = rng.uniform_int(1, 3);
                    for (int e = 0; e < n; ++e) {
                        SurfaceSlots* dst = surface_in_room(ri, -1);
                        if (dst)
                            add_item(category_id(pool[rng.uniform(sizeof(pool) / sizeof(pool[0]))]),
                                     *dst, 1);
                    }
                    break;
                }
                case RoomLabel::Bathroom: {
                    const char* pool[] = {"Towel",       "SoapBar", "Plunger",
                                          "SprayBottle", "Cloth",   "ToiletPaper"};
                    const int n = rng.uniform_int(2, 4);
                    for (int e = 0; e < n; ++e) {
                        SurfaceSlots* dst = surface_in_room(ri, -1);
                        if (dst)
                            add_item(category_id(pool[rng.uniform(sizeof(pool) / sizeof(pool[0]))]),
                                     *dst, 1);
                    }
                    break;
                }
                case RoomLabel::Kitchen:
                    break;
            }
        }
        if (!ok) continue;
        s.finalize();

        // Structural acceptance: free-block connectivity including all room
        // center blocks.
        std::vector<Cell> free_blocks;
        std::set<std::pair<int, int>> free_set;
        for (int by = 1; by < g.hb - 1; ++by)
            for (int bx = 1; bx < g.wb - 1; ++bx) {
                const Cell center{bx * kBlockCells + kBlockCells / 2,
                                  by * kBlockCells + kBlockCells / 2};
                if (s.block_free(center)) {
                    free_blocks.push_back({bx, by});
                    free_set.insert({bx, by});
                }
            }
        if (free_blocks.empty()) continue;
        std::deque<std::pair<int, int>> q{{free_blocks[0].x, free_blocks[0].y}};
        std::set<std::pair<int, int>> seen{{free_blocks[0].x, free_blocks[0].y}};
        while (!q.empty()) {
            auto [x, y] = q.front();
            q.pop_front();
            const int dx[4] = {1, -1, 0, 0};
            const int dy[4] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d) {
                std::pair<int, int> n{x + dx[d], y + dy[d]};
                if (free_set.count(n) && !seen.count(n)) {
                    seen.insert(n);
                    q.push_back(n);
                }
            }
        }
        if (seen.size() != free_set.size()) continue;
        bool centers_ok = true;
        for (const auto& r : s.rooms) {
            const Cell c = r.center();
            const std::pair<int, int> cb{c.x / kBlockCells, c.y / kBlockCells};
            if (!free_set.count(cb)) centers_ok = false;
        }
        if (!centers_ok) continue;
        if (size_class == SizeClass::Large && s.rooms.size() < 3) continue;

        return s;
    }
    throw std::runtime_error("generate_scene: constraints unsatisfiable after 1000 attempts");
}

}  // namespace eifsim
