#include "eifsim/planner.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "eifsim/tasks.hpp"

namespace eifsim {

using json = nlohmann::json;

std::string PlanStep::to_json() const {
    json j;
    j["index"] = index;
    j["text"] = text;
    j["primitive"] = primitive_hint ? json(to_string(*primitive_hint)) : json(nullptr);
    json d = json::array();
    for (CategoryId c : demanded) d.push_back(category_name(c));
    j["demanded"] = d;
    j["terminal"] = terminal;
    if (instance_hint) j["instance_hint"] = *instance_hint;
    return j.dump();
}

PlanStep PlanStep::from_json(const std::string& text_in) {
    const json j = json::parse(text_in);
    PlanStep s;
    s.index = j.at("index").get<int>();
    s.text = j.at("text").get<std::string>();
    if (!j.at("primitive").is_null()) {
        ActionPrimitive p;
        if (!primitive_from_string(j.at("primitive").get<std::string>(), p))
            throw std::invalid_argument("bad primitive in plan step");
        s.primitive_hint = p;
    }
    for (const auto& d : j.at("demanded")) {
        const CategoryId c = category_id(d.get<std::string>());
        if (c < 0) throw std::invalid_argument("unknown category in plan step");
        s.demanded.push_back(c);
    }
    s.terminal = j.at("terminal").get<bool>();
    if (j.contains("instance_hint")) s.instance_hint = j.at("instance_hint").get<ObjectId>();
    return s;
}

PlanStep make_terminal_step(int index) {
    PlanStep s;
    s.index = index;
    s.text = "Step " + std::to_string(index) + ". end.";
    s.terminal = true;
    return s;
}

std::string MapSummary::to_json() const {
    json j;
    json d = json::array();
    for (const auto& e : discovered)
        d.push_back({{"id", e.id},
                     {"category", category_name(e.category)},
                     {"cell", {e.cell.x, e.cell.y}}});
    j["discovered"] = d;
    j["explored_fraction"] = explored_fraction;
    j["frontier_count"] = frontier_count;
    return j.dump();
}

MapSummary make_summary(const FeatureMap& map, int interior_free_cells) {
    MapSummary s;
    for (const auto& [id, d] : map.registry()) s.discovered.push_back({id, d.category, d.cell});
    if (interior_free_cells > 0)
        s.explored_fraction =
            std::min(1.0, static_cast<double>(map.explored_free_cells()) / interior_free_cells);
    return s;
}

// ---------------------------------------------------------------------------
// Oracle planner

PlanStep OraclePlanner::next_step(const std::string&, const std::vector<PlanStep>& done,
                                  const MapSummary&) {
    for (const PlanStep& s : done)
        if (s.terminal) return s;
    const std::size_t i = done.size();
    if (i >= plan_.size()) return make_terminal_step(static_cast<int>(i) + 1);
    check_budget(max_steps_);
    return plan_[i];
}

// ---------------------------------------------------------------------------
// Substitution table

std::vector<CategoryId> SubstitutionTable::equivalents(CategoryId cat) const {
    for (const auto& cls : classes)
        if (std::find(cls.begin(), cls.end(), cat) != cls.end()) {
            std::vector<CategoryId> out;
            for (CategoryId c : cls)
                if (c != cat) out.push_back(c);
            return out;
        }
    return {};
}

SubstitutionTable SubstitutionTable::defaults() {
    static const char* kClasses[][4] = {
        {"Bottle", "Mug", "Cup", nullptr},
        {"Plate", "Bowl", nullptr, nullptr},
        {"Tomato", "Apple", "Onion", nullptr},
        {"Potato", "Carrot", nullptr, nullptr},
        {"Fork", "Spoon", "Spatula", nullptr},
        {"Pen", "Pencil", nullptr, nullptr},
        {"Towel", "Cloth", nullptr, nullptr},
        {"AlarmClock", "Watch", nullptr, nullptr},
        {"DiningTable", "CounterTop", "CoffeeTable", "SideTable"},
    };
    SubstitutionTable t;
    for (const auto& cls : kClasses) {
        std::vector<CategoryId> ids;
        for (const char* name : cls)
            if (name) ids.push_back(category_id(name));
        t.classes.push_back(std::move(ids));
    }
    return t;
}

SubstitutionTable SubstitutionTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open substitution table: " + path);
    json j;
    in >> j;
    SubstitutionTable t;
    for (const auto& cls : j.at("classes")) {
        std::vector<CategoryId> ids;
        for (const auto& name : cls) {
            const CategoryId c = category_id(name.get<std::string>());
            if (c < 0) throw std::invalid_argument("unknown category in substitution table");
            ids.push_back(c);
        }
        t.classes.push_back(std::move(ids));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Heuristic planner

HeuristicPlanner::HeuristicPlanner(const std::string& instruction, const SubstitutionTable& table,
                                   const Config& cfg)
    : table_(table), cfg_(cfg) {
    const auto goals = parse_instruction(instruction);
    if (goals) {
        desired_ = synthesize_plan(*goals, nullptr);
        parsed_ok_ = true;
    }
}

namespace {

CategoryId remapped(const std::vector<std::pair<CategoryId, CategoryId>>& remap, CategoryId c) {
    for (const auto& [from, to] : remap)
        if (from == c) return to;
    return c;
}

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

}  // namespace

PlanStep HeuristicPlanner::adjusted(PlanStep step, const MapSummary&) {
    for (auto& c : step.demanded) {
        const CategoryId to = remapped(remap_, c);
        if (to != c) {
            step.text = replace_all(step.text, category_text(c), category_text(to));
            c = to;
        }
    }
    return step;
}

PlanStep HeuristicPlanner::next_step(const std::string&, const std::vector<PlanStep>& done,
                                     const MapSummary& summary) {
    for (const PlanStep& s : done)
        if (s.terminal) return s;
    if (!parsed_ok_) return make_terminal_step(1);

    // Interpret calls: a grown done list means the previously emitted step
    // completed; an unchanged one means the current step is stalled and the
    // planner should adapt (open containers, substitute) or repeat itself.
    static constexpr int kFresh = -1;
    if (seen_done_ == kFresh || static_cast<int>(done.size()) > seen_done_) {
        if (seen_done_ != kFresh && !last_injected_) ++cursor_;
        if (seen_done_ != kFresh && last_injected_) last_injected_ = false;
        seen_done_ = static_cast<int>(done.size());
    } else {
        // Stalled step: demanded category missing with exploration spent.
        const std::size_t cur = static_cast<std::size_t>(cursor_);
        if (cur < desired_.size()) {
            PlanStep step = adjusted(desired_[cur], summary);
            CategoryId missing = -1;
            for (CategoryId c : step.demanded)
                if (!summary.has_category(c)) missing = c;
            const bool spent = summary.frontier_count == 0 ||
                               summary.explored_fraction >= cfg_.explored_substitution_threshold;
            if (missing >= 0 && spent) {
                // First try opening a discovered, not-yet-requested container.
                for (const auto& e : summary.discovered) {
                    const CategoryInfo& info = category_info(e.category);
                    if (!(info.affordances & kOpenable) || info.shelf_offset <= 0.0f) continue;
                    if (std::find(opened_requested_.begin(), opened_requested_.end(), e.id) !=
                        opened_requested_.end())
                        continue;
                    opened_requested_.push_back(e.id);
                    check_budget(cfg_.max_hl_steps);
                    PlanStep open_step;
                    open_step.index = static_cast<int>(done.size()) + 1;
                    open_step.text = "Step " + std::to_string(open_step.index) + ". Open the " +
                                     category_text(e.category) + ".";
                    open_step.primitive_hint = ActionPrimitive::Open;
                    open_step.demanded = {e.category};
                    last_injected_ = true;
                    return open_step;
                }
                // Then substitute a discovered role-equivalent.
                if (cfg_.substitution_enabled) {
                    for (CategoryId eq : table_.equivalents(missing)) {
                        if (!summary.has_category(eq)) continue;
                        remap_.emplace_back(missing, eq);
                        check_budget(cfg_.max_hl_steps);
                        PlanStep sub = adjusted(desired_[cur], summary);
                        sub.index = static_cast<int>(done.size()) + 1;
                        return sub;
                    }
                }
            }
        }
    }

    const std::size_t cur = static_cast<std::size_t>(cursor_);
    if (cur >= desired_.size()) return make_terminal_step(static_cast<int>(done.size()) + 1);
    check_budget(cfg_.max_hl_steps);
    PlanStep step = adjusted(desired_[cur], summary);
    step.index = static_cast<int>(done.size()) + 1;
    return step;
}

}  // namespace eifsim
