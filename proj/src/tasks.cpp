#include "eifsim/tasks.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "eifsim/pathfind.hpp"
#include "eifsim/rng.hpp"
#include "eifsim/simulator.hpp"

namespace eifsim {

using json = nlohmann::json;

const char* to_string(TaskSpec::Category c) {
    switch (c) {
        case TaskSpec::Category::TargetSpecificShort: return "target_specific_short";
        case TaskSpec::Category::TargetSpecificLong: return "target_specific_long";
        case TaskSpec::Category::Abstract: return "abstract";
    }
    return "target_specific_short";
}

// ---------------------------------------------------------------------------
// Instruction grammar

std::string category_text(CategoryId id) {
    const std::string name = category_name(id);
    std::string out;
    for (std::size_t i = 0; i < name.size(); ++i) {
        const char c = name[i];
        if (std::isupper(static_cast<unsigned char>(c))) {
            // Keep acronym runs together ("TVStand" -> "tv stand").
            const bool boundary =
                i > 0 && (std::islower(static_cast<unsigned char>(name[i - 1])) ||
                          (i + 1 < name.size() && std::islower(static_cast<unsigned char>(name[i + 1]))));
            if (boundary) out += ' ';
            out += static_cast<char>(std::tolower(c));
        } else {
            out += c;
        }
    }
    return out;
}

namespace {

const std::map<std::string, CategoryId>& text_index() {
    static const std::map<std::string, CategoryId> index = [] {
        std::map<std::string, CategoryId> m;
        for (CategoryId id : all_categories()) m[category_text(id)] = id;
        return m;
    }();
    return index;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
}

}  // namespace

CategoryId category_from_text(const std::string& lower_text) {
    auto it = text_index().find(lower_text);
    return it == text_index().end() ? -1 : it->second;
}

namespace {

std::string clause_text(const SubGoal& g) {
    switch (g.kind) {
        case SubGoal::Kind::Slice: return "slice the " + category_text(g.a);
        case SubGoal::Kind::Heat: return "heat the " + category_text(g.a);
        case SubGoal::Kind::Open: return "open the " + category_text(g.a);
        case SubGoal::Kind::TurnOn: return "turn on the " + category_text(g.a);
        case SubGoal::Kind::PutIn: {
            const CategoryInfo& info = category_info(g.b);
            const bool container = (info.affordances & kOpenable) && info.shelf_offset > 0.0f;
            return "put the " + category_text(g.a) + (container ? " in the " : " on the ") +
                   category_text(g.b);
        }
    }
    return "";
}

std::optional<SubGoal> parse_clause(const std::string& clause) {
    SubGoal g;
    if (starts_with(clause, "slice the ")) {
        g.kind = SubGoal::Kind::Slice;
        g.a = category_from_text(clause.substr(10));
        return g.a >= 0 ? std::optional<SubGoal>(g) : std::nullopt;
    }
    if (starts_with(clause, "heat the ")) {
        g.kind = SubGoal::Kind::Heat;
        g.a = category_from_text(clause.substr(9));
        return g.a >= 0 ? std::optional<SubGoal>(g) : std::nullopt;
    }
    if (starts_with(clause, "open the ")) {
        g.kind = SubGoal::Kind::Open;
        g.a = category_from_text(clause.substr(9));
        return g.a >= 0 ? std::optional<SubGoal>(g) : std::nullopt;
    }
    if (starts_with(clause, "turn on the ")) {
        g.kind = SubGoal::Kind::TurnOn;
        g.a = category_from_text(clause.substr(12));
        return g.a >= 0 ? std::optional<SubGoal>(g) : std::nullopt;
    }
    if (starts_with(clause, "put the ")) {
        const std::string rest = clause.substr(8);
        for (const char* sep : {" in the ", " on the "}) {
            const std::size_t pos = rest.find(sep);
            if (pos == std::string::npos) continue;
            g.kind = SubGoal::Kind::PutIn;
            g.a = category_from_text(rest.substr(0, pos));
            g.b = category_from_text(rest.substr(pos + std::string(sep).size()));
            if (g.a >= 0 && g.b >= 0) return g;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

// Canonical recipes the heuristic uses for abstract instructions it cannot
// ground in the (unknown) scene.
std::optional<std::vector<SubGoal>> abstract_recipe(const std::string& text) {
    auto cat = [](const char* n) { return category_id(n); };
    if (starts_with(text, "make a simple breakfast"))
        return std::vector<SubGoal>{{SubGoal::Kind::Slice, cat("Tomato"), -1},
                                    {SubGoal::Kind::Heat, cat("Potato"), -1}};
    if (starts_with(text, "make a simple lunch"))
        return std::vector<SubGoal>{{SubGoal::Kind::Slice, cat("Tomato"), -1},
                                    {SubGoal::Kind::PutIn, cat("Tomato"), cat("Bowl")}};
    if (starts_with(text, "prepare a snack"))
        return std::vector<SubGoal>{{SubGoal::Kind::PutIn, cat("Apple"), cat("Plate")}};
    if (starts_with(text, "tidy up the ")) {
        const std::string room = text.substr(12);
        if (starts_with(room, "livingroom") || starts_with(room, "living room"))
            return std::vector<SubGoal>{{SubGoal::Kind::PutIn, cat("RemoteControl"), cat("Shelf")},
                                        {SubGoal::Kind::PutIn, cat("Book"), cat("Shelf")}};
        if (starts_with(room, "bedroom"))
            return std::vector<SubGoal>{{SubGoal::Kind::PutIn, cat("Book"), cat("Dresser")},
                                        {SubGoal::Kind::PutIn, cat("AlarmClock"), cat("Dresser")}};
        if (starts_with(room, "bathroom"))
            return std::vector<SubGoal>{{SubGoal::Kind::PutIn, cat("Towel"), cat("Bathtub")},
                                        {SubGoal::Kind::PutIn, cat("SoapBar"), cat("Bathtub")}};
        if (starts_with(room, "kitchen"))
            return std::vector<SubGoal>{{SubGoal::Kind::PutIn, cat("DishSponge"), cat("Sink")},
                                        {SubGoal::Kind::PutIn, cat("Fork"), cat("Sink")}};
    }
    return std::nullopt;
}

}  // namespace

std::string instruction_text(const std::vector<SubGoal>& goals) {
    std::string out;
    for (std::size_t i = 0; i < goals.size(); ++i) {
        std::string clause = clause_text(goals[i]);
        if (i == 0 && !clause.empty())
            clause[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(clause[0])));
        if (i) out += ", then ";
        out += clause;
    }
    out += ".";
    return out;
}

std::optional<std::vector<SubGoal>> parse_instruction(const std::string& instruction) {
    std::string text = lower(instruction);
    while (!text.empty() && (text.back() == '.' || text.back() == ' ')) text.pop_back();

    if (auto recipe = abstract_recipe(text)) return recipe;

    std::vector<SubGoal> goals;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t next = text.find(", then ", pos);
        const std::string clause =
            text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        const auto g = parse_clause(clause);
        if (!g) return std::nullopt;
        goals.push_back(*g);
        if (next == std::string::npos) break;
        pos = next + 7;
    }
    return goals.empty() ? std::nullopt : std::optional<std::vector<SubGoal>>(goals);
}

// ---------------------------------------------------------------------------
// Plan synthesis

namespace {

struct PlanBuilder {
    const Scene* scene;
    std::vector<PlanStep> steps;
    std::set<CategoryId> found;
    std::map<CategoryId, ObjectId> bound;   // category -> chosen instance
    std::map<ObjectId, bool> open_state;    // containers toggled by this plan
    CategoryId held = -1;

    void add(std::optional<ActionPrimitive> prim, CategoryId cat, const std::string& verb) {
        PlanStep s;
        s.index = static_cast<int>(steps.size()) + 1;
        s.text = "Step " + std::to_string(s.index) + ". " + verb + " the " + category_text(cat) + ".";
        s.primitive_hint = prim;
        s.demanded = {cat};
        auto it = bound.find(cat);
        if (it != bound.end()) s.instance_hint = it->second;
        steps.push_back(std::move(s));
    }

    bool is_open(const ObjectInstance& o) const {
        auto it = open_state.find(o.id);
        return it != open_state.end() ? it->second : o.state.is_open;
    }

    void find(CategoryId cat) {
        if (found.count(cat)) return;
        // Bind the lowest-id instance and open its container chain first.
        if (scene) {
            const std::vector<ObjectId> insts = scene->instances_of(cat);
            if (!insts.empty()) {
                bound.emplace(cat, insts.front());
                std::vector<const ObjectInstance*> chain;  // outermost first
                const ObjectInstance* o = scene->object(insts.front());
                ObjectId p = o->parent;
                while (p != kNoObject) {
                    const ObjectInstance* po = scene->object(p);
                    if (!po) break;
                    const CategoryInfo& info = category_info(po->category);
                    if ((info.affordances & kOpenable) && info.shelf_offset > 0.0f)
                        chain.insert(chain.begin(), po);
                    p = po->parent;
                }
                for (const ObjectInstance* c : chain) {
                    if (is_open(*c)) continue;
                    bound.emplace(c->category, c->id);
                    find(c->category);
                    bound[c->category] = c->id;
                    add(ActionPrimitive::Open, c->category, "Open");
                    open_state[c->id] = true;
                }
            }
        }
        add(std::nullopt, cat, "Find");
        found.insert(cat);
    }

    void put_down_held() {
        if (held < 0) return;
        const CategoryId counter = category_id("CounterTop");
        find(counter);
        add(ActionPrimitive::Place, counter, "Put the " + category_text(held) + " on");
        held = -1;
    }

    void acquire(CategoryId cat) {
        if (held == cat) return;
        put_down_held();
        find(cat);
        add(ActionPrimitive::PickUp, cat, "Pick up");
        held = cat;
    }

    // The bound instance of a receptacle, for open-state tracking.
    const ObjectInstance* bound_instance(CategoryId cat) const {
        if (!scene) return nullptr;
        auto it = bound.find(cat);
        return it == bound.end() ? nullptr : scene->object(it->second);
    }

    void expand(const SubGoal& g) {
        switch (g.kind) {
            case SubGoal::Kind::Slice: {
                acquire(category_id("Knife"));
                find(g.a);
                add(ActionPrimitive::Slice, g.a, "Slice");
                break;
            }
            case SubGoal::Kind::PutIn: {
                acquire(g.a);
                find(g.b);
                const CategoryInfo& info = category_info(g.b);
                const bool container = (info.affordances & kOpenable) && info.shelf_offset > 0.0f;
                const ObjectInstance* inst = bound_instance(g.b);
                if (container && (!inst || !is_open(*inst))) {
                    add(ActionPrimitive::Open, g.b, "Open");
                    if (inst) open_state[inst->id] = true;
                }
                add(ActionPrimitive::Place, g.b, "Put the " + category_text(g.a) + " in");
                held = -1;
                break;
            }
            case SubGoal::Kind::Heat: {
                const CategoryId mw = category_id("Microwave");
                acquire(g.a);
                find(mw);
                const ObjectInstance* inst = bound_instance(mw);
                if (!inst || !is_open(*inst)) {
                    add(ActionPrimitive::Open, mw, "Open");
                    if (inst) open_state[inst->id] = true;
                }
                add(ActionPrimitive::Place, mw, "Put the " + category_text(g.a) + " in");
                held = -1;
                add(ActionPrimitive::Close, mw, "Close");
                if (inst) open_state[inst->id] = false;
                add(ActionPrimitive::ToggleOn, mw, "Turn on");
                add(ActionPrimitive::ToggleOff, mw, "Turn off");
                break;
            }
            case SubGoal::Kind::Open: {
                find(g.a);
                const ObjectInstance* inst = bound_instance(g.a);
                if (inst && is_open(*inst)) break;  // already opened by a chain
                add(ActionPrimitive::Open, g.a, "Open");
                if (inst) open_state[inst->id] = true;
                break;
            }
            case SubGoal::Kind::TurnOn: {
                find(g.a);
                add(ActionPrimitive::ToggleOn, g.a, "Turn on");
                break;
            }
        }
    }
};

}  // namespace

std::vector<PlanStep> synthesize_plan(const std::vector<SubGoal>& goals, const Scene* scene) {
    PlanBuilder b;
    b.scene = scene;
    for (const SubGoal& g : goals) b.expand(g);
    return b.steps;
}

GoalCondition goal_for(const std::vector<SubGoal>& goals) {
    GoalCondition g;
    for (const SubGoal& sg : goals) {
        Predicate p;
        switch (sg.kind) {
            case SubGoal::Kind::Slice: p = {PredicateKind::Sliced, sg.a, -1}; break;
            case SubGoal::Kind::PutIn: p = {PredicateKind::In, sg.a, sg.b}; break;
            case SubGoal::Kind::Heat: p = {PredicateKind::Heated, sg.a, -1}; break;
            case SubGoal::Kind::Open: p = {PredicateKind::Open, sg.a, -1}; break;
            case SubGoal::Kind::TurnOn: p = {PredicateKind::On, sg.a, -1}; break;
        }
        if (std::find(g.conjuncts.begin(), g.conjuncts.end(), p) == g.conjuncts.end())
            g.conjuncts.push_back(p);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Similarity filter

double edit_similarity(const std::string& a, const std::string& b) {
    if (a.empty() && b.empty()) return 1.0;
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<int> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= m; ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    const double lev = prev[m];
    return 1.0 - lev / static_cast<double>(std::max(n, m));
}

// ---------------------------------------------------------------------------
// Feasibility validation

namespace {

Heading facing_toward(Cell from, Cell to) {
    const int dx = to.x - from.x;
    const int dy = to.y - from.y;
    if (std::abs(dx) >= std::abs(dy)) return dx >= 0 ? Heading::East : Heading::West;
    return dy >= 0 ? Heading::North : Heading::South;
}

// Approach poses from which `inst` can be interacted with: free block center
// in range, line of sight, and actually visible in a rendered frame.
bool interactable(const Scene& scene, ObjectId inst, const Config& cfg) {
    SceneOccView view{&scene};
    BlockLattice<SceneOccView> lat(view);
    const Cell anchor = scene.object(inst)->pose;
    const double lo = cfg.interaction_min_range + 0.1;
    const double hi = cfg.interaction_range - 0.15;
    const int radius_blocks = static_cast<int>(std::ceil(hi / (cfg.cell_size * kBlockCells))) + 1;
    const auto [tbx, tby] = BlockLattice<SceneOccView>::block_of(anchor);
    std::vector<Cell> candidates;
    for (int by = tby - radius_blocks; by <= tby + radius_blocks; ++by)
        for (int bx = tbx - radius_blocks; bx <= tbx + radius_blocks; ++bx) {
            if (bx < 0 || by < 0 || bx >= lat.wb() || by >= lat.hb()) continue;
            if (!lat.traversable(bx, by)) continue;
            const Cell center = BlockLattice<SceneOccView>::center(bx, by);
            const Cell tcell = scene.nearest_footprint_cell(center, inst);
            const double d = scene.distance_m(center, tcell);
            if (d < lo || d > hi) continue;
            if (!line_of_sight(view, center, tcell)) continue;
            candidates.push_back(center);
        }
    std::sort(candidates.begin(), candidates.end());
    for (const Cell& c : candidates) {
        const Cell tcell = scene.nearest_footprint_cell(c, inst);
        const Observation obs =
            render_observation(scene, c, facing_toward(c, tcell), cfg);
        if (obs.contains_instance(inst)) return true;
    }
    return false;
}

}  // namespace

namespace {

// Symbolic plan execution. Rebinds each interaction step's instance hint to
// the instance that actually worked, so the oracle controller replays the
// exact binding this check certified.
bool validate_and_bind(TaskSpec& task, const Scene& scene, const Config& cfg) {
    Scene scratch = scene;
    std::optional<ObjectId> held;
    for (PlanStep& step : task.gt_plan) {
        if (step.terminal) break;
        if (step.demanded.empty()) return false;
        const CategoryId cat = step.demanded.front();
        if (!step.primitive_hint) {
            bool any = false;
            for (ObjectId id : scratch.instances_of(cat))
                if (!scratch.hidden(id)) {
                    if (!any && !step.instance_hint) step.instance_hint = id;
                    any = true;
                }
            if (!any) return false;
            continue;
        }
        std::vector<ObjectId> order = scratch.instances_of(cat);
        if (step.instance_hint) {
            auto it = std::find(order.begin(), order.end(), *step.instance_hint);
            if (it != order.end()) {
                order.erase(it);
                order.insert(order.begin(), *step.instance_hint);
            }
        }
        bool done = false;
        for (ObjectId id : order) {
            if (scratch.hidden(id)) continue;
            if (scratch.object(id)->state.is_held) continue;
            ApplyResult dry = apply_effect(scratch, *step.primitive_hint, id, held);
            if (!dry.ok()) continue;
            if (!interactable(scratch, id, cfg)) continue;
            scratch = std::move(*dry.scene);
            if (*step.primitive_hint == ActionPrimitive::PickUp) held = id;
            if (*step.primitive_hint == ActionPrimitive::Place) held.reset();
            step.instance_hint = id;
            done = true;
            break;
        }
        if (!done) return false;
    }
    return goal_satisfied(scratch, task.goal);
}

}  // namespace

bool validate_feasibility(const TaskSpec& task, const Scene& scene, const Config& cfg) {
    TaskSpec copy = task;
    return validate_and_bind(copy, scene, cfg);
}

// ---------------------------------------------------------------------------
// Task generation

namespace {

std::vector<CategoryId> present_categories(const Scene& scene, std::uint8_t affordance) {
    std::set<CategoryId> seen;
    std::vector<CategoryId> out;
    for (const auto& o : scene.objects) {
        if (affordance && !(o.affordances() & affordance)) continue;
        if (seen.insert(o.category).second) out.push_back(o.category);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool near_duplicate(const std::vector<TaskSpec>& accepted, const std::string& instruction) {
    for (const auto& t : accepted)
        if (edit_similarity(t.instruction, instruction) > 0.9) return true;
    return false;
}

bool word_in_text(const std::string& text, const std::string& word) {
    std::size_t pos = 0;
    while ((pos = text.find(word, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || !std::isalpha(static_cast<unsigned char>(text[pos - 1]));
        const std::size_t end = pos + word.size();
        const bool right_ok =
            end >= text.size() || !std::isalpha(static_cast<unsigned char>(text[end]));
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

}  // namespace

TaskCounts mixed_counts(int total) {
    // Paper proportions 1386:333:332.
    TaskCounts c;
    c.n_short = static_cast<int>(std::llround(total * 1386.0 / 2051.0));
    c.n_long = static_cast<int>(std::llround(total * 333.0 / 2051.0));
    c.n_abstract = total - c.n_short - c.n_long;
    return c;
}

std::vector<TaskSpec> generate_tasks(const Scene& scene, TaskCounts counts, std::uint64_t seed,
                                     const Config& cfg) {
    SplitMix64 rng(mix_seed(seed, scene.seed, 0x7A5C5ULL));
    std::vector<TaskSpec> out;

    const std::vector<CategoryId> sliceables = present_categories(scene, kSliceable);
    const std::vector<CategoryId> pickupables = present_categories(scene, kPickupable);
    const std::vector<CategoryId> openables = present_categories(scene, kOpenable);
    const std::vector<CategoryId> toggleables = present_categories(scene, kToggleable);
    std::vector<CategoryId> receptacles;
    for (CategoryId c : present_categories(scene, kReceptacle))
        if (!(category_info(c).affordances & kPickupable) || c == category_id("Bowl") ||
            c == category_id("Plate"))
            receptacles.push_back(c);
    const bool has_microwave = !scene.instances_of(category_id("Microwave")).empty();

    auto make_task = [&](const std::vector<SubGoal>& goals, TaskSpec::Category category,
                         const std::string& text) -> std::optional<TaskSpec> {
        TaskSpec t;
        t.instruction = text;
        t.category = category;
        t.goal = goal_for(goals);
        t.gt_plan = synthesize_plan(goals, &scene);
        t.scene_seed = scene.seed;
        t.scene_size = scene.size_class;
        const int len = static_cast<int>(t.gt_plan.size());
        if (category == TaskSpec::Category::TargetSpecificShort && len >= 15) return std::nullopt;
        if (category == TaskSpec::Category::TargetSpecificLong && (len < 15 || len > 28))
            return std::nullopt;
        if (len > 28) return std::nullopt;
        if (!validate_and_bind(t, scene, cfg)) return std::nullopt;
        return t;
    };

    // --- short candidates -------------------------------------------------
    std::vector<std::vector<SubGoal>> short_pool;
    for (CategoryId f : sliceables) short_pool.push_back({{SubGoal::Kind::Slice, f, -1}});
    for (CategoryId i : pickupables)
        for (CategoryId r : receptacles)
            if (i != r) short_pool.push_back({{SubGoal::Kind::PutIn, i, r}});
    for (CategoryId c : openables)
        if (category_info(c).shelf_offset > 0.0f) short_pool.push_back({{SubGoal::Kind::Open, c, -1}});
    for (CategoryId c : toggleables)
        if (c != category_id("Microwave")) short_pool.push_back({{SubGoal::Kind::TurnOn, c, -1}});
    if (has_microwave)
        for (CategoryId f : sliceables) short_pool.push_back({{SubGoal::Kind::Heat, f, -1}});
    for (CategoryId f : sliceables)
        for (CategoryId r : receptacles)
            if (f != r)
                short_pool.push_back(
                    {{SubGoal::Kind::Slice, f, -1}, {SubGoal::Kind::PutIn, f, r}});
    rng.shuffle(short_pool);
    for (const auto& goals : short_pool) {
        if (static_cast<int>(std::count_if(out.begin(), out.end(), [](const TaskSpec& t) {
                return t.category == TaskSpec::Category::TargetSpecificShort;
            })) >= counts.n_short)
            break;
        const std::string text = instruction_text(goals);
        if (near_duplicate(out, text)) continue;
        if (auto t = make_task(goals, TaskSpec::Category::TargetSpecificShort, text))
            out.push_back(std::move(*t));
    }

    // --- long chains --------------------------------------------------------
    int long_accepted = 0;
    for (int attempt = 0; attempt < counts.n_long * 40 && long_accepted < counts.n_long;
         ++attempt) {
        const int n_goals = rng.uniform_int(3, 5);
        std::vector<SubGoal> goals;
        std::set<CategoryId> used_targets;
        for (int k = 0; k < n_goals; ++k) {
            const int kind = rng.uniform_int(0, 3);
            if (kind == 0 && !sliceables.empty()) {
                const CategoryId f =
                    sliceables[static_cast<std::size_t>(rng.uniform(sliceables.size()))];
                if (used_targets.count(f)) continue;
                goals.push_back({SubGoal::Kind::Slice, f, -1});
                // Half the time, follow the slice with a placement of the
                // same food (the natural kitchen sequence).
                if (!receptacles.empty() && rng.next01() < 0.5) {
                    const CategoryId r =
                        receptacles[static_cast<std::size_t>(rng.uniform(receptacles.size()))];
                    if (r != f) goals.push_back({SubGoal::Kind::PutIn, f, r});
                }
                used_targets.insert(f);
            } else if (kind == 1 && !pickupables.empty() && !receptacles.empty()) {
                const CategoryId i =
                    pickupables[static_cast<std::size_t>(rng.uniform(pickupables.size()))];
                const CategoryId r =
                    receptacles[static_cast<std::size_t>(rng.uniform(receptacles.size()))];
                if (i == r || used_targets.count(i)) continue;
                goals.push_back({SubGoal::Kind::PutIn, i, r});
                used_targets.insert(i);
            } else if (kind == 2 && has_microwave && !sliceables.empty()) {
                const CategoryId f =
                    sliceables[static_cast<std::size_t>(rng.uniform(sliceables.size()))];
                if (used_targets.count(f)) continue;
                goals.push_back({SubGoal::Kind::Heat, f, -1});
                used_targets.insert(f);
            } else if (kind == 3 && !toggleables.empty()) {
                const CategoryId c =
                    toggleables[static_cast<std::size_t>(rng.uniform(toggleables.size()))];
                if (c == category_id("Microwave") || used_targets.count(c)) continue;
                goals.push_back({SubGoal::Kind::TurnOn, c, -1});
                used_targets.insert(c);
            }
        }
        if (goals.size() < 3) continue;
        const std::string text = instruction_text(goals);
        if (near_duplicate(out, text)) continue;
        if (auto t = make_task(goals, TaskSpec::Category::TargetSpecificLong, text)) {
            out.push_back(std::move(*t));
            ++long_accepted;
        }
    }

    // --- abstract -----------------------------------------------------------
    std::vector<std::pair<std::string, std::vector<SubGoal>>> abstract_pool;
    auto first_present = [&](std::initializer_list<const char*> names,
                             const std::vector<CategoryId>& pool) -> CategoryId {
        for (const char* n : names) {
            const CategoryId c = category_id(n);
            if (std::find(pool.begin(), pool.end(), c) != pool.end()) return c;
        }
        return -1;
    };
    {
        const CategoryId f1 = first_present({"Tomato", "Apple", "Bread", "Onion"}, sliceables);
        const CategoryId f2 = first_present({"Potato", "Carrot", "Bread", "Lettuce"}, sliceables);
        if (f1 >= 0 && f2 >= 0 && f1 != f2 && has_microwave)
            abstract_pool.push_back({"Make a simple breakfast for me.",
                                     {{SubGoal::Kind::Slice, f1, -1}, {SubGoal::Kind::Heat, f2, -1}}});
        const CategoryId bowl = first_present({"Bowl", "Plate"}, pickupables);
        if (f1 >= 0 && bowl >= 0)
            abstract_pool.push_back({"Make a simple lunch for me.",
                                     {{SubGoal::Kind::Slice, f1, -1},
                                      {SubGoal::Kind::PutIn, f1, bowl}}});
        const CategoryId snack = first_present({"Apple", "Bread", "Tomato"}, pickupables);
        if (snack >= 0 && bowl >= 0 && snack != bowl)
            abstract_pool.push_back(
                {"Prepare a snack for me.", {{SubGoal::Kind::PutIn, snack, bowl}}});
        for (const Room& room : scene.rooms) {
            // Two pickupables resting in this room, filed into a receptacle there.
            std::vector<ObjectId> items;
            std::vector<ObjectId> receps;
            for (const auto& o : scene.objects) {
                if (!room.contains(o.pose)) continue;
                if (o.has(kPickupable) && !scene.hidden(o.id)) items.push_back(o.id);
                if (o.has(kReceptacle) && !o.has(kPickupable) && !o.has(kOpenable))
                    receps.push_back(o.id);
            }
            if (items.size() < 2 || receps.empty()) continue;
            const CategoryId i1 = scene.object(items[0])->category;
            const CategoryId i2 = scene.object(items[1])->category;
            const CategoryId r = scene.object(receps[0])->category;
            if (i1 == i2 || i1 == r || i2 == r) continue;
            abstract_pool.push_back({"Tidy up the " + std::string(to_string(room.label)) + ".",
                                     {{SubGoal::Kind::PutIn, i1, r}, {SubGoal::Kind::PutIn, i2, r}}});
        }
    }
    rng.shuffle(abstract_pool);
    int abstract_accepted = 0;
    for (const auto& [text, goals] : abstract_pool) {
        if (abstract_accepted >= counts.n_abstract) break;
        // Category names must not leak into the abstract instruction text.
        bool leaks = false;
        const std::string low = lower(text);
        for (CategoryId c : all_categories())
            if (word_in_text(low, category_text(c))) leaks = true;
        if (leaks) continue;
        if (near_duplicate(out, text)) continue;
        if (auto t = make_task(goals, TaskSpec::Category::Abstract, text)) {
            out.push_back(std::move(*t));
            ++abstract_accepted;
        }
    }

    // Stable ids.
    for (std::size_t i = 0; i < out.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "t%016llx_%03zu",
                      static_cast<unsigned long long>(scene.seed), i);
        out[i].id = buf;
    }
    return out;
}

std::vector<TaskSpec> generate_substitution_probes(const Scene& scene, int count,
                                                   std::uint64_t seed, const Config& cfg,
                                                   const SubstitutionTable& table) {
    SplitMix64 rng(mix_seed(seed, scene.seed, 0x5B5ULL));
    std::vector<TaskSpec> out;
    const CategoryId sink = category_id("Sink");
    const bool has_sink = !scene.instances_of(sink).empty();

    std::vector<std::pair<CategoryId, CategoryId>> pairs;  // (absent demanded, present actual)
    for (const auto& cls : table.classes) {
        std::vector<CategoryId> present;
        std::vector<CategoryId> absent;
        for (CategoryId c : cls) {
            if (!(category_info(c).affordances & kPickupable)) continue;
            if (scene.instances_of(c).empty()) absent.push_back(c);
            else present.push_back(c);
        }
        if (present.size() == 1 && !absent.empty())
            for (CategoryId a : absent) pairs.emplace_back(a, present.front());
    }
    rng.shuffle(pairs);

    for (const auto& [demanded, actual] : pairs) {
        if (static_cast<int>(out.size()) >= count) break;
        if (!has_sink) break;
        std::vector<SubGoal> plan_goals{{SubGoal::Kind::PutIn, actual, sink}};
        std::vector<SubGoal> text_goals{{SubGoal::Kind::PutIn, demanded, sink}};
        TaskSpec t;
        t.instruction = instruction_text(text_goals);
        t.category = TaskSpec::Category::TargetSpecificShort;
        t.goal = goal_for(plan_goals);
        t.gt_plan = synthesize_plan(plan_goals, &scene);
        t.scene_seed = scene.seed;
        t.scene_size = scene.size_class;
        if (static_cast<int>(t.gt_plan.size()) >= 15) continue;
        if (near_duplicate(out, t.instruction)) continue;
        if (!validate_and_bind(t, scene, cfg)) continue;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "p%016llx_%03zu",
                      static_cast<unsigned long long>(scene.seed), out.size());
        t.id = buf;
        out.push_back(std::move(t));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Corpus serialization

namespace {

json task_json(const TaskSpec& t) {
    json j;
    j["id"] = t.id;
    j["instruction"] = t.instruction;
    j["category"] = to_string(t.category);
    json goal = json::array();
    for (const auto& p : t.goal.conjuncts) {
        json pj;
        pj["kind"] = to_string(p.kind);
        pj["a"] = category_name(p.a);
        if (p.kind == PredicateKind::In) pj["b"] = category_name(p.b);
        goal.push_back(pj);
    }
    j["goal"] = goal;
    json plan = json::array();
    for (const auto& s : t.gt_plan) plan.push_back(json::parse(s.to_json()));
    j["gt_plan"] = plan;
    j["scene_seed"] = t.scene_seed;
    j["scene_size"] = to_string(t.scene_size);
    j["expert_ll_actions"] = t.expert_ll_actions;
    j["expert_path_m"] = t.expert_path_m;
    return j;
}

TaskSpec task_from(const json& j) {
    TaskSpec t;
    t.id = j.at("id").get<std::string>();
    t.instruction = j.at("instruction").get<std::string>();
    const std::string cat = j.at("category").get<std::string>();
    if (cat == "target_specific_short") t.category = TaskSpec::Category::TargetSpecificShort;
    else if (cat == "target_specific_long") t.category = TaskSpec::Category::TargetSpecificLong;
    else t.category = TaskSpec::Category::Abstract;
    for (const auto& pj : j.at("goal")) {
        Predicate p;
        predicate_kind_from_string(pj.at("kind").get<std::string>(), p.kind);
        p.a = category_id(pj.at("a").get<std::string>());
        if (pj.contains("b")) p.b = category_id(pj.at("b").get<std::string>());
        t.goal.conjuncts.push_back(p);
    }
    for (const auto& sj : j.at("gt_plan")) t.gt_plan.push_back(PlanStep::from_json(sj.dump()));
    t.scene_seed = j.at("scene_seed").get<std::uint64_t>();
    t.scene_size =
        j.at("scene_size").get<std::string>() == "large" ? SizeClass::Large : SizeClass::Small;
    t.expert_ll_actions = j.at("expert_ll_actions").get<int>();
    t.expert_path_m = j.at("expert_path_m").get<double>();
    return t;
}

}  // namespace

std::string tasks_to_json(const std::vector<TaskSpec>& tasks) {
    json arr = json::array();
    for (const auto& t : tasks) arr.push_back(task_json(t));
    json j;
    j["schema_version"] = 1;
    j["tasks"] = arr;
    return j.dump(2);
}

std::vector<TaskSpec> tasks_from_json(const std::string& text) {
    const json j = json::parse(text);
    std::vector<TaskSpec> out;
    for (const auto& tj : j.at("tasks")) out.push_back(task_from(tj));
    return out;
}

std::string task_to_json(const TaskSpec& task) { return task_json(task).dump(2); }

TaskSpec task_from_json(const std::string& text) { return task_from(json::parse(text)); }

}  // namespace eifsim
