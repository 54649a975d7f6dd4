#pragma once

#include <optional>
#include <string>
#include <utility>

#include "eifsim/config.hpp"
#include "eifsim/observation.hpp"
#include "eifsim/scene.hpp"

namespace eifsim {

struct AgentState {
    Cell pose;
    Heading heading = Heading::North;
    std::optional<ObjectId> held;
    double odometer_m = 0.0;
    int low_level_actions = 0;
};

enum class InteractStatus : std::uint8_t {
    Success,
    OutOfRangeTooFar,
    OutOfRangeTooClose,
    NotVisible,
    PreconditionViolated,
};

const char* to_string(InteractStatus s);

struct InteractResult {
    InteractStatus status = InteractStatus::Success;
    std::string reason;     // precondition reason when applicable
    double distance_m = 0;  // agent-to-target distance at attempt time

    bool ok() const { return status == InteractStatus::Success; }
};

// Column ray directions of the pinhole camera; shared by the renderer and the
// top-down projection so depths unproject onto exactly the rendered cells.
struct CameraRays {
    std::vector<double> dir_x;  // per column, world frame
    std::vector<double> dir_y;
};
CameraRays camera_rays(int image_width, Heading heading, double fov_deg);

// Pure rendering: 90-degree FOV raycast against walls and object bodies,
// vertical extents resolved per cell. Contents of closed containers are
// never rendered.
Observation render_observation(const Scene& scene, Cell pose, Heading heading, const Config& cfg);

// Agent embodiment: pose, discrete motion, observation and interaction.
// One instance per episode.
class Simulator {
public:
    Simulator(Scene scene, const Config& cfg);

    const Scene& scene() const { return scene_; }
    const AgentState& state() const { return state_; }
    const Config& config() const { return cfg_; }

    // Seeded placement on a uniformly sampled free motion block; renders the
    // initial observation.
    Observation reset(std::uint64_t run_seed);

    struct MotionResult {
        Observation obs;
        bool blocked = false;
    };
    MotionResult step_motion(MotionCmd cmd);

    Observation render() const { return render_observation(scene_, state_.pose, state_.heading, cfg_); }

    // Interaction gate: target must be visible in `obs` and within
    // (interaction_min_range, interaction_range]. State change is delegated
    // to apply_effect; failures leave the world untouched.
    InteractResult interact(ActionPrimitive primitive, ObjectId target, const Observation& obs);

private:
    Scene scene_;
    Config cfg_;
    AgentState state_;
};

}  // namespace eifsim
