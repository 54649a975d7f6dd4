#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eifsim/config.hpp"
#include "eifsim/featmap.hpp"
#include "eifsim/taxonomy.hpp"
#include "eifsim/types.hpp"

namespace eifsim {

// One high-level plan step in templated natural language plus the structured
// fields the controller consumes.
struct PlanStep {
    int index = 0;
    std::string text;
    std::optional<ActionPrimitive> primitive_hint;
    std::vector<CategoryId> demanded;  // {O_k}: categories this step needs
    bool terminal = false;
    // Ground-truth instance binding (oracle plans only): keeps the expert
    // plan, the feasibility validator and the oracle controller pointed at
    // the same object when a category has several instances.
    std::optional<ObjectId> instance_hint;

    std::string to_json() const;
    static PlanStep from_json(const std::string& text);

    friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

PlanStep make_terminal_step(int index);

// Textual digest of the map for planners without a multimodal pathway.
struct MapSummary {
    struct Entry {
        ObjectId id;
        CategoryId category;
        Cell cell;
    };
    std::vector<Entry> discovered;  // ordered by instance id
    double explored_fraction = 0.0;
    int frontier_count = 0;

    bool has_category(CategoryId cat) const {
        for (const auto& e : discovered)
            if (e.category == cat) return true;
        return false;
    }
    std::string to_json() const;
};

MapSummary make_summary(const FeatureMap& map, int interior_free_cells);

class PlannerExhausted : public std::runtime_error {
public:
    PlannerExhausted() : std::runtime_error("planner exhausted the high-level step budget") {}
};

// High-level planner contract: instruction + completed steps + map digest in,
// next step out. Implementations must be deterministic.
class Planner {
public:
    virtual ~Planner() = default;
    virtual PlanStep next_step(const std::string& instruction, const std::vector<PlanStep>& done,
                               const MapSummary& summary) = 0;
    virtual const char* name() const = 0;

protected:
    int emitted_ = 0;
    void check_budget(int max_steps) {
        if (++emitted_ > max_steps) throw PlannerExhausted();
    }
};

// Ground-truth plan playback.
class OraclePlanner : public Planner {
public:
    OraclePlanner(std::vector<PlanStep> gt_plan, int max_steps)
        : plan_(std::move(gt_plan)), max_steps_(max_steps) {}
    PlanStep next_step(const std::string&, const std::vector<PlanStep>& done,
                       const MapSummary&) override;
    const char* name() const override { return "oracle"; }

private:
    std::vector<PlanStep> plan_;
    int max_steps_;
};

// Role-equivalence classes used for commonsense substitution.
struct SubstitutionTable {
    std::vector<std::vector<CategoryId>> classes;

    std::vector<CategoryId> equivalents(CategoryId cat) const;
    static SubstitutionTable defaults();
    static SubstitutionTable load_file(const std::string& path);
};

// Template-rule planner over the map summary. Parses the instruction with the
// same grammar the task generator emits, plans canonically, opens discovered
// containers when a demanded object stays missing, and substitutes
// role-equivalent discovered objects once the demanded category is proven
// absent (explored fraction above threshold or no frontiers left).
class HeuristicPlanner : public Planner {
public:
    HeuristicPlanner(const std::string& instruction, const SubstitutionTable& table,
                     const Config& cfg);
    PlanStep next_step(const std::string& instruction, const std::vector<PlanStep>& done,
                       const MapSummary& summary) override;
    const char* name() const override { return "heuristic"; }

private:
    PlanStep adjusted(PlanStep step, const MapSummary& summary);

    SubstitutionTable table_;
    Config cfg_;
    std::vector<PlanStep> desired_;
    std::vector<std::pair<CategoryId, CategoryId>> remap_;    // proven-absent -> substitute
    std::vector<ObjectId> opened_requested_;                  // containers already tried
    bool parsed_ok_ = false;
    int cursor_ = 0;          // next desired step to emit
    int seen_done_ = -1;      // done-list size at the previous call
    bool last_injected_ = false;  // last emission was an injected Open step
};

}  // namespace eifsim
