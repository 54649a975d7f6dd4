#pragma once

#include <optional>
#include <set>
#include <vector>

#include "eifsim/attention.hpp"
#include "eifsim/config.hpp"
#include "eifsim/featmap.hpp"
#include "eifsim/pathfind.hpp"
#include "eifsim/planner.hpp"
#include "eifsim/rng.hpp"
#include "eifsim/simulator.hpp"

namespace eifsim {

enum class FrontierPolicy : std::uint8_t { Oracle, Greedy, Random };

const char* to_string(FrontierPolicy p);
bool frontier_policy_from_string(const std::string& s, FrontierPolicy& out);

// Executable command emitted by the low-level controller. Navigate carries no
// target object; interaction primitives carry both target and location.
struct ActionCommand {
    ActionPrimitive primitive = ActionPrimitive::Navigate;
    CategoryId target_category = -1;
    ObjectId target_instance = kNoObject;
    Cell location;

    std::string to_json() const;
};

enum class DecideStatus : std::uint8_t { Ok, ExplorationExhausted };

struct DecideResult {
    DecideStatus status = DecideStatus::Ok;
    ActionCommand command;
    int frontier_id = -1;  // set when the command navigates to a frontier
};

// Low-level controller: map a plan step and the current frontier set to one
// executable command. Interaction targets present in the discovered-object
// registry are addressed at their recorded location; otherwise the step's
// exploration continues through the selected frontier.
class Controller {
public:
    Controller(FrontierPolicy policy, const Config& cfg, const EmbeddingTable& table)
        : policy_(policy), cfg_(cfg), table_(&table) {}

    FrontierPolicy policy() const { return policy_; }
    void set_oracle_scene(const Scene* scene) { oracle_scene_ = scene; }
    void set_random_stream(SplitMix64* rng) { rng_ = rng; }

    DecideResult decide(const AgentState& state, const PlanStep& step,
                        const std::vector<Frontier>& frontiers, const FeatureMap& map,
                        const std::set<ObjectId>& instance_blacklist = {},
                        const std::set<int>& frontier_blacklist = {}) const;

    // Exposed for tests and for the SFT labeling path.
    const Frontier* select_frontier(const PlanStep& step, const std::vector<Frontier>& frontiers,
                                    const FeatureMap& map, const AgentState& state) const;

    // Free approach blocks within interaction range of `target_cell` with map
    // line of sight, ordered by distance from the agent.
    std::vector<Cell> approach_cells(const FeatureMap& map, const AgentState& state,
                                     Cell target_cell) const;
    std::vector<Cell> approach_cells_scene(const Scene& scene, Cell from, Cell target_cell) const;

private:
    const Frontier* select_oracle(const PlanStep& step, const std::vector<Frontier>& frontiers,
                                  const AgentState& state) const;
    const Frontier* select_greedy(const PlanStep& step, const std::vector<Frontier>& frontiers,
                                  const FeatureMap& map, const AgentState& state) const;

    FrontierPolicy policy_;
    Config cfg_;
    const EmbeddingTable* table_;
    const Scene* oracle_scene_ = nullptr;
    SplitMix64* rng_ = nullptr;
};

}  // namespace eifsim
