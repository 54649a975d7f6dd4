#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eifsim/config.hpp"
#include "eifsim/goal.hpp"
#include "eifsim/planner.hpp"
#include "eifsim/scene.hpp"

namespace eifsim {

// Atomic instruction clause; instructions are one clause (short), a chain
// (long), or a recipe keyword expanded scene-side (abstract).
struct SubGoal {
    enum class Kind { Slice, PutIn, Heat, Open, TurnOn };
    Kind kind;
    CategoryId a = -1;
    CategoryId b = -1;  // receptacle for PutIn
};

struct TaskSpec {
    enum class Category { TargetSpecificShort, TargetSpecificLong, Abstract };

    std::string id;
    std::string instruction;
    Category category = Category::TargetSpecificShort;
    GoalCondition goal;
    std::vector<PlanStep> gt_plan;
    std::uint64_t scene_seed = 0;
    SizeClass scene_size = SizeClass::Small;
    int expert_ll_actions = -1;   // filled at corpus build from an oracle episode
    double expert_path_m = -1.0;
};

const char* to_string(TaskSpec::Category c);

struct TaskCounts {
    int n_short = 0;
    int n_long = 0;
    int n_abstract = 0;
};

// Templated task instantiation against the scene with near-duplicate
// filtering (normalized edit similarity > 0.9) and feasibility validation.
std::vector<TaskSpec> generate_tasks(const Scene& scene, TaskCounts counts, std::uint64_t seed,
                                     const Config& cfg);

// Paper-proportioned mixed corpus (1386:333:332).
TaskCounts mixed_counts(int total);

// Special corpus for substitution probing: the instruction demands a category
// absent from the scene; goal and ground-truth plan use a present
// role-equivalent instead.
std::vector<TaskSpec> generate_substitution_probes(const Scene& scene, int count,
                                                   std::uint64_t seed, const Config& cfg,
                                                   const SubstitutionTable& table);

// Symbolic execution of the ground-truth plan with an omniscient navigator:
// precondition order, containment visibility, interaction reachability
// (approach pose with line of sight and an actual rendered sighting), then
// goal satisfaction.
bool validate_feasibility(const TaskSpec& task, const Scene& scene, const Config& cfg);

// Instruction grammar (shared with the heuristic planner).
std::string category_text(CategoryId id);                      // "DiningTable" -> "dining table"
CategoryId category_from_text(const std::string& lower_text);  // -1 if unknown
std::optional<std::vector<SubGoal>> parse_instruction(const std::string& instruction);
std::string instruction_text(const std::vector<SubGoal>& goals);

// Plan synthesis. With a scene, container-opening steps are inserted for
// targets that start hidden; without one (heuristic use) plans are canonical.
std::vector<PlanStep> synthesize_plan(const std::vector<SubGoal>& goals, const Scene* scene);

GoalCondition goal_for(const std::vector<SubGoal>& goals);

double edit_similarity(const std::string& a, const std::string& b);  // 1 - lev/maxlen

// Corpus files.
std::string tasks_to_json(const std::vector<TaskSpec>& tasks);
std::vector<TaskSpec> tasks_from_json(const std::string& text);
std::string task_to_json(const TaskSpec& task);
TaskSpec task_from_json(const std::string& text);

}  // namespace eifsim
