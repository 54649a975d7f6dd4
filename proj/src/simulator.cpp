#include "eifsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "eifsim/rng.hpp"

namespace eifsim {

const char* to_string(InteractStatus s) {
    switch (s) {
        case InteractStatus::Success: return "success";
        case InteractStatus::OutOfRangeTooFar: return "out_of_range_too_far";
        case InteractStatus::OutOfRangeTooClose: return "out_of_range_too_close";
        case InteractStatus::NotVisible: return "not_visible";
        case InteractStatus::PreconditionViolated: return "precondition_violated";
    }
    return "success";
}

CameraRays camera_rays(int image_width, Heading heading, double fov_deg) {
    CameraRays rays;
    rays.dir_x.resize(static_cast<std::size_t>(image_width));
    rays.dir_y.resize(static_cast<std::size_t>(image_width));
    const Cell f = heading_dir(heading);
    // Right vector in world frame (image x grows to the agent's right).
    const double rx = f.y;
    const double ry = -f.x;
    const double half_tan = std::tan(fov_deg * 0.5 * M_PI / 180.0);
    for (int x = 0; x < image_width; ++x) {
        const double ndc = (x + 0.5 - image_width * 0.5) / (image_width * 0.5);
        double dx = f.x + rx * ndc * half_tan;
        double dy = f.y + ry * ndc * half_tan;
        const double n = std::sqrt(dx * dx + dy * dy);
        rays.dir_x[static_cast<std::size_t>(x)] = dx / n;
        rays.dir_y[static_cast<std::size_t>(x)] = dy / n;
    }
    return rays;
}

namespace {

struct Band {
    float z0, z1;
    ObjectId id;
    CategoryId cat;
};

struct BandCache {
    const Scene& scene;
    const Config& cfg;
    std::unordered_map<ObjectId, float> z0_memo;
    std::unordered_map<std::size_t, std::vector<Band>> cells;

    float object_z0(const ObjectInstance& o) {
        auto it = z0_memo.find(o.id);
        if (it != z0_memo.end()) return it->second;
        float z = 0.0f;
        if (o.parent != kNoObject) {
            const ObjectInstance* p = scene.object(o.parent);
            if (p) {
                const CategoryInfo& pi = category_info(p->category);
                const bool inside = (pi.affordances & kOpenable) && pi.shelf_offset > 0.0f;
                z = object_z0(*p) + (inside ? pi.shelf_offset : pi.height);
            }
        }
        z0_memo[o.id] = z;
        return z;
    }

    const std::vector<Band>& bands_at(Cell c) {
        const std::size_t key = scene.idx(c);
        auto it = cells.find(key);
        if (it != cells.end()) return it->second;
        std::vector<Band> bands;
        if (scene.wall_at(c)) {
            bands.push_back({0.0f, static_cast<float>(cfg.wall_height), kWallInstanceId,
                             kWallCategory});
        }
        for (ObjectId id : scene.occupants(c)) {
            const ObjectInstance* o = scene.object(id);
            if (!o || o->state.is_held || scene.hidden(id)) continue;
            const CategoryInfo& info = category_info(o->category);
            const float z0 = object_z0(*o);
            const bool container = (info.affordances & kOpenable) && info.shelf_offset > 0.0f;
            const float extent = (container && o->state.is_open) ? info.shelf_offset : info.height;
            bands.push_back({z0, z0 + extent, id, o->category});
        }
        // Descending ray hits the tallest surface first; deterministic order.
        std::sort(bands.begin(), bands.end(), [](const Band& a, const Band& b) {
            if (a.z1 != b.z1) return a.z1 > b.z1;
            return a.id < b.id;
        });
        return cells.emplace(key, std::move(bands)).first->second;
    }
};

struct Crossing {
    float t0, t1;  // ground-distance interval through the cell, meters
    const std::vector<Band>* bands;
};

}  // namespace

Observation render_observation(const Scene& scene, Cell pose, Heading heading, const Config& cfg) {
    const int W = cfg.image_size;
    const int H = cfg.image_size;
    Observation obs;
    obs.width = W;
    obs.height = H;
    obs.depth = Eigen::ArrayXXf::Constant(H, W, Observation::kDepthInf);
    obs.category = Eigen::ArrayXXi::Zero(H, W);
    obs.instance = Eigen::ArrayXXi::Zero(H, W);
    obs.camera_cell = pose;
    obs.camera_heading = heading;
    obs.camera_z = static_cast<float>(cfg.camera_height);

    const CameraRays rays = camera_rays(W, heading, cfg.fov_deg);
    const double cs = scene.cell_size;
    const double cam_x = (pose.x + 0.5) * cs;
    const double cam_y = (pose.y + 0.5) * cs;
    const double half_tan_v = std::tan(cfg.fov_deg * 0.5 * M_PI / 180.0);

    BandCache cache{scene, cfg, {}, {}};
    std::vector<Crossing> crossings;
    crossings.reserve(256);

    std::vector<float> tan_phi(static_cast<std::size_t>(H));
    for (int y = 0; y < H; ++y)
        tan_phi[static_cast<std::size_t>(y)] =
            static_cast<float>((H * 0.5 - (y + 0.5)) / (H * 0.5) * half_tan_v);

    for (int x = 0; x < W; ++x) {
        const double dx = rays.dir_x[static_cast<std::size_t>(x)];
        const double dy = rays.dir_y[static_cast<std::size_t>(x)];

        // DDA over map cells, collecting crossing intervals with any bands.
        crossings.clear();
        int cx = pose.x;
        int cy = pose.y;
        const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
        const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
        const double inv_dx = dx != 0 ? 1.0 / dx : 0.0;
        const double inv_dy = dy != 0 ? 1.0 / dy : 0.0;
        double t_max_x = dx != 0 ? ((cx + (step_x > 0 ? 1 : 0)) * cs - cam_x) * inv_dx : 1e30;
        double t_max_y = dy != 0 ? ((cy + (step_y > 0 ? 1 : 0)) * cs - cam_y) * inv_dy : 1e30;
        const double t_delta_x = dx != 0 ? cs * std::abs(inv_dx) : 1e30;
        const double t_delta_y = dy != 0 ? cs * std::abs(inv_dy) : 1e30;
        double t = 0.0;
        while (t < cfg.max_range) {
            const double t_next = std::min(t_max_x, t_max_y);
            if (scene.in_bounds({cx, cy})) {
                const auto& bands = cache.bands_at({cx, cy});
                if (!bands.empty())
                    crossings.push_back({static_cast<float>(t), static_cast<float>(t_next), &bands});
            } else {
                break;
            }
            if (t_max_x < t_max_y) {
                cx += step_x;
                t = t_max_x;
                t_max_x += t_delta_x;
            } else {
                cy += step_y;
                t = t_max_y;
                t_max_y += t_delta_y;
            }
        }

        for (int y = 0; y < H; ++y) {
            const float tp = tan_phi[static_cast<std::size_t>(y)];
            for (const Crossing& cr : crossings) {
                const float depth_mid = 0.5f * (cr.t0 + cr.t1);
                if (depth_mid > cfg.max_range) break;
                const float za = obs.camera_z + tp * cr.t0;
                const float zb = obs.camera_z + tp * cr.t1;
                const float zlo = std::min(za, zb);
                const float zhi = std::max(za, zb);
                const Band* hit = nullptr;
                for (const Band& b : *cr.bands) {
                    if (zhi >= b.z0 && zlo <= b.z1) {
                        hit = &b;
                        break;
                    }
                }
                if (hit) {
                    obs.depth(y, x) = depth_mid;
                    obs.category(y, x) = hit->cat;
                    obs.instance(y, x) = hit->id;
                    break;
                }
            }
        }
    }
    return obs;
}

Simulator::Simulator(Scene scene, const Config& cfg) : scene_(std::move(scene)), cfg_(cfg) {}

Observation Simulator::reset(std::uint64_t run_seed) {
    SplitMix64 rng(mix_seed(run_seed, scene_.seed, 0x51C3A7ULL));
    std::vector<Cell> spots;
    for (int by = 0; by * kBlockCells < scene_.height; ++by)
        for (int bx = 0; bx * kBlockCells < scene_.width; ++bx) {
            const Cell center{bx * kBlockCells + kBlockCells / 2,
                              by * kBlockCells + kBlockCells / 2};
            if (scene_.block_free(center)) spots.push_back(center);
        }
    state_ = AgentState{};
    state_.pose = spots[static_cast<std::size_t>(rng.uniform(spots.size()))];
    state_.heading = static_cast<Heading>(rng.uniform(4));
    return render();
}

Simulator::MotionResult Simulator::step_motion(MotionCmd cmd) {
    ++state_.low_level_actions;
    switch (cmd) {
        case MotionCmd::RotateLeft:
            state_.heading = rotate_left(state_.heading);
            break;
        case MotionCmd::RotateRight:
            state_.heading = rotate_right(state_.heading);
            break;
        case MotionCmd::Forward: {
            const Cell d = heading_dir(state_.heading);
            for (int k = 1; k <= kBlockCells; ++k) {
                const Cell c{state_.pose.x + d.x * k, state_.pose.y + d.y * k};
                if (scene_.blocked(c)) return {render(), true};
            }
            state_.pose = {state_.pose.x + d.x * kBlockCells, state_.pose.y + d.y * kBlockCells};
            state_.odometer_m += cfg_.agent_step;
            break;
        }
    }
    return {render(), false};
}

InteractResult Simulator::interact(ActionPrimitive primitive, ObjectId target,
                                   const Observation& obs) {
    ++state_.low_level_actions;
    InteractResult r;
    r.distance_m = scene_.object_distance_m(state_.pose, target);
    if (!obs.contains_instance(target)) {
        r.status = InteractStatus::NotVisible;
        return r;
    }
    if (r.distance_m > cfg_.interaction_range) {
        r.status = InteractStatus::OutOfRangeTooFar;
        return r;
    }
    if (r.distance_m <= cfg_.interaction_min_range) {
        r.status = InteractStatus::OutOfRangeTooClose;
        return r;
    }
    ApplyResult applied = apply_effect(scene_, primitive, target, state_.held);
    if (!applied.ok()) {
        r.status = InteractStatus::PreconditionViolated;
        r.reason = applied.error->reason;
        return r;
    }
    scene_ = std::move(*applied.scene);
    if (primitive == ActionPrimitive::PickUp) state_.held = target;
    if (primitive == ActionPrimitive::Place) state_.held.reset();
    return r;
}

}  // namespace eifsim
