#include "eifsim/controller.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace eifsim {

using json = nlohmann::json;

const char* to_string(FrontierPolicy p) {
    switch (p) {
        case FrontierPolicy::Oracle: return "oracle";
        case FrontierPolicy::Greedy: return "greedy";
        case FrontierPolicy::Random: return "random";
    }
    return "greedy";
}

bool frontier_policy_from_string(const std::string& s, FrontierPolicy& out) {
    if (s == "oracle") out = FrontierPolicy::Oracle;
    else if (s == "greedy") out = FrontierPolicy::Greedy;
    else if (s == "random") out = FrontierPolicy::Random;
    else return false;
    return true;
}

std::string ActionCommand::to_json() const {
    json j;
    j["primitive"] = to_string(primitive);
    if (target_instance != kNoObject) {
        j["target"] = target_instance;
        j["target_category"] = category_name(target_category);
    }
    j["location"] = {location.x, location.y};
    return j.dump();
}

namespace {

const DiscoveredObject* pick_registry_instance(const FeatureMap& map, CategoryId cat,
                                               const std::set<ObjectId>& blacklist) {
    for (const auto& [id, d] : map.registry())
        if (d.category == cat && !blacklist.count(id)) return &d;
    return nullptr;
}

}  // namespace

std::vector<Cell> Controller::approach_cells(const FeatureMap& map, const AgentState& state,
                                             Cell target_cell) const {
    std::vector<Cell> out;
    MapOccView view{&map};
    BlockLattice<MapOccView> lat(view);
    const double lo = cfg_.interaction_min_range + 0.1;
    const double hi = cfg_.interaction_range - 0.15;
    const int radius_blocks =
        static_cast<int>(std::ceil(hi / (cfg_.cell_size * kBlockCells))) + 1;
    const auto [tbx, tby] = BlockLattice<MapOccView>::block_of(target_cell);
    for (int by = tby - radius_blocks; by <= tby + radius_blocks; ++by)
        for (int bx = tbx - radius_blocks; bx <= tbx + radius_blocks; ++bx) {
            if (bx < 0 || by < 0 || bx >= lat.wb() || by >= lat.hb()) continue;
            if (!lat.traversable(bx, by) || lat.has_unknown(bx, by)) continue;
            const Cell center = BlockLattice<MapOccView>::center(bx, by);
            const double d = cell_distance(center, target_cell) * cfg_.cell_size;
            if (d < lo || d > hi) continue;
            if (!line_of_sight(view, center, target_cell)) continue;
            out.push_back(center);
        }
    std::sort(out.begin(), out.end(), [&](const Cell& a, const Cell& b) {
        const double da = cell_distance(a, state.pose);
        const double db = cell_distance(b, state.pose);
        if (da != db) return da < db;
        return a < b;
    });
    return out;
}

std::vector<Cell> Controller::approach_cells_scene(const Scene& scene, Cell from,
                                                   Cell target_cell) const {
    std::vector<Cell> out;
    SceneOccView view{&scene};
    BlockLattice<SceneOccView> lat(view);
    const double lo = cfg_.interaction_min_range + 0.1;
    const double hi = cfg_.interaction_range - 0.15;
    const int radius_blocks =
        static_cast<int>(std::ceil(hi / (cfg_.cell_size * kBlockCells))) + 1;
    const auto [tbx, tby] = BlockLattice<SceneOccView>::block_of(target_cell);
    for (int by = tby - radius_blocks; by <= tby + radius_blocks; ++by)
        for (int bx = tbx - radius_blocks; bx <= tbx + radius_blocks; ++bx) {
            if (bx < 0 || by < 0 || bx >= lat.wb() || by >= lat.hb()) continue;
            if (!lat.traversable(bx, by)) continue;
            const Cell center = BlockLattice<SceneOccView>::center(bx, by);
            const double d = cell_distance(center, target_cell) * cfg_.cell_size;
            if (d < lo || d > hi) continue;
            if (!line_of_sight(view, center, target_cell)) continue;
            out.push_back(center);
        }
    std::sort(out.begin(), out.end(), [&](const Cell& a, const Cell& b) {
        const double da = cell_distance(a, from);
        const double db = cell_distance(b, from);
        if (da != db) return da < db;
        return a < b;
    });
    return out;
}

const Frontier* Controller::select_oracle(const PlanStep& step,
                                          const std::vector<Frontier>& frontiers,
                                          const AgentState& state) const {
    if (!oracle_scene_ || step.demanded.empty()) return &frontiers.front();
    const Scene& scene = *oracle_scene_;

    // Nearest true instance of the demanded category.
    const ObjectInstance* target = nullptr;
    double best_d = 1e18;
    for (const auto& o : scene.objects) {
        if (o.category != step.demanded.front() || o.state.is_held) continue;
        const double d = scene.object_distance_m(state.pose, o.id);
        if (d < best_d) {
            best_d = d;
            target = &o;
        }
    }
    if (!target) return &frontiers.front();

    const Cell tcell = scene.nearest_footprint_cell(state.pose, target->id);
    const std::vector<Cell> goals = approach_cells_scene(scene, state.pose, tcell);
    SceneOccView view{&scene};
    CellPath path;
    if (!goals.empty()) path = plan_cells(view, state.pose, goals.front());
    if (!path.found) {
        // Degenerate geometry; fall back to straight-line scoring.
        path.cells = {state.pose, tcell};
    }

    const Frontier* best = nullptr;
    double best_score = 1e18;
    for (const Frontier& f : frontiers) {
        double d = 1e18;
        for (const Cell& c : path.cells) d = std::min(d, cell_distance(f.centroid, c));
        if (d < best_score - 1e-9 ||
            (std::abs(d - best_score) <= 1e-9 && best &&
             (f.centroid < best->centroid))) {
            best_score = d;
            best = &f;
        }
    }
    return best;
}

const Frontier* Controller::select_greedy(const PlanStep& step,
                                          const std::vector<Frontier>& frontiers,
                                          const FeatureMap& map, const AgentState& state) const {
    const PromptTriplet prompts = build_prompts(step.demanded, *table_);
    std::vector<double> scores(frontiers.size(), 0.0);
    for (std::size_t i = 0; i < frontiers.size(); ++i) {
        const Eigen::MatrixXf& toks = frontiers[i].tokens;
        double s = 0.0;
        for (int k = 0; k < toks.cols(); ++k) s += cosine(toks.col(k), prompts.positive);
        scores[i] = s / static_cast<double>(toks.cols());
    }
    double best = -1e18;
    for (double s : scores) best = std::max(best, s);
    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] == best) tied.push_back(i);
    if (tied.size() == 1) return &frontiers[tied[0]];

    // Tie-break: smaller path distance, then lexicographic centroid.
    MapOccView view{&map};
    double best_cost = 1e18;
    const Frontier* pick = nullptr;
    for (std::size_t i : tied) {
        const MotionPlan plan = plan_motion(view, state.pose, state.heading,
                                            {frontiers[i].centroid});
        const double cost = plan.found ? plan.cost : 1e17 + cell_distance(state.pose, frontiers[i].centroid);
        if (cost < best_cost - 1e-9 ||
            (std::abs(cost - best_cost) <= 1e-9 && pick && frontiers[i].centroid < pick->centroid)) {
            best_cost = cost;
            pick = &frontiers[i];
        }
    }
    return pick ? pick : &frontiers[tied[0]];
}

const Frontier* Controller::select_frontier(const PlanStep& step,
                                            const std::vector<Frontier>& frontiers,
                                            const FeatureMap& map, const AgentState& state) const {
    if (frontiers.empty()) return nullptr;
    switch (policy_) {
        case FrontierPolicy::Oracle: return select_oracle(step, frontiers, state);
        case FrontierPolicy::Greedy: return select_greedy(step, frontiers, map, state);
        case FrontierPolicy::Random: {
            if (!rng_) return &frontiers.front();
            return &frontiers[static_cast<std::size_t>(rng_->uniform(frontiers.size()))];
        }
    }
    return &frontiers.front();
}

DecideResult Controller::decide(const AgentState& state, const PlanStep& step,
                                const std::vector<Frontier>& frontiers, const FeatureMap& map,
                                const std::set<ObjectId>& instance_blacklist,
                                const std::set<int>& frontier_blacklist) const {
    DecideResult r;

    // Interaction steps address discovered targets directly. A bound
    // instance hint wins when discovered; the oracle waits for exactly the
    // certified instance, other policies settle for any discovered one.
    if (step.primitive_hint && !step.demanded.empty()) {
        const CategoryId cat = step.demanded.front();
        const DiscoveredObject* d = nullptr;
        if (step.instance_hint && !instance_blacklist.count(*step.instance_hint)) {
            auto it = map.registry().find(*step.instance_hint);
            if (it != map.registry().end() && it->second.category == cat) d = &it->second;
        }
        const bool strict_hint = policy_ == FrontierPolicy::Oracle && step.instance_hint &&
                                 !instance_blacklist.count(*step.instance_hint);
        if (!d && !strict_hint) d = pick_registry_instance(map, cat, instance_blacklist);
        if (d) {
            const double dist = cell_distance(state.pose, d->cell) * cfg_.cell_size;
            MapOccView view{&map};
            if (dist > cfg_.interaction_min_range && dist <= cfg_.interaction_range &&
                line_of_sight(view, state.pose, d->cell)) {
                r.command = ActionCommand{*step.primitive_hint, cat, d->id, d->cell};
                return r;
            }
            r.command = ActionCommand{ActionPrimitive::Navigate, -1, kNoObject, d->cell};
            return r;
        }
    } else if (!step.primitive_hint && !step.demanded.empty()) {
        // Find step with everything already discovered: walk to the first
        // demanded object so the follow-up interaction starts close.
        bool all = true;
        for (CategoryId c : step.demanded)
            if (!pick_registry_instance(map, c, instance_blacklist)) all = false;
        if (all) {
            const DiscoveredObject* d =
                pick_registry_instance(map, step.demanded.front(), instance_blacklist);
            r.command = ActionCommand{ActionPrimitive::Navigate, -1, kNoObject, d->cell};
            return r;
        }
    }

    // Exploration: navigate to a frontier.
    std::vector<Frontier> usable;
    for (const Frontier& f : frontiers)
        if (!frontier_blacklist.count(f.id)) usable.push_back(f);
    if (!usable.empty()) {
        const Frontier* f = select_frontier(step, usable, map, state);
        r.command = ActionCommand{ActionPrimitive::Navigate, -1, kNoObject, f->centroid};
        r.frontier_id = f->id;
        return r;
    }

    // Out of frontiers. The oracle controller knows the world and may still
    // walk to the true target; everyone else is done exploring.
    if (policy_ == FrontierPolicy::Oracle && oracle_scene_ && !step.demanded.empty()) {
        const Scene& scene = *oracle_scene_;
        const ObjectInstance* target = nullptr;
        if (step.instance_hint && !instance_blacklist.count(*step.instance_hint))
            target = scene.object(*step.instance_hint);
        if (!target) {
            double best_d = 1e18;
            for (const auto& o : scene.objects) {
                if (o.category != step.demanded.front() || o.state.is_held) continue;
                if (instance_blacklist.count(o.id)) continue;
                const double d = scene.object_distance_m(state.pose, o.id);
                if (d < best_d) {
                    best_d = d;
                    target = &o;
                }
            }
        }
        if (target) {
            r.command = ActionCommand{ActionPrimitive::Navigate, -1, kNoObject,
                                      scene.nearest_footprint_cell(state.pose, target->id)};
            return r;
        }
    }
    r.status = DecideStatus::ExplorationExhausted;
    return r;
}

}  // namespace eifsim
