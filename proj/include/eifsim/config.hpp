#pragma once

#include <cstdint>
#include <string>

namespace eifsim {

// Runtime configuration. Defaults are the reference values; everything here
// can be overridden from a JSON config file and again from CLI flags.
struct Config {
    // Geometry
    double cell_size = 0.05;          // meters per map cell
    double agent_step = 0.25;         // meters per Forward (kBlockCells cells)
    double max_range = 5.0;           // camera range, meters
    double interaction_range = 1.5;   // max interaction distance, meters
    double interaction_min_range = 0.25;  // closer than this fails as "too close"
    double camera_height = 1.0;       // meters
    double wall_height = 2.5;         // meters
    double fov_deg = 90.0;            // horizontal and vertical FOV
    int image_size = 64;              // square egocentric image

    // Feature map
    int feature_dim = 64;
    int frontier_threshold = 150;         // minimum frontier component area, cells
    int frontier_tokens = 32;             // visual embeddings sampled per frontier
    int token_neighborhood_radius = 12;   // cells; token sampling region around a frontier
    std::uint64_t embed_seed = 17;        // base seed for pseudo-embeddings

    // Attention
    double softmax_temperature = 0.1;

    // Planning / control
    int max_hl_steps = 30;            // high-level plan cap per instruction
    int replan_interval = 5;          // motions between path replans
    int interaction_retries = 3;      // attempts before aborting the episode
    int max_ll_actions = 3000;        // low-level action budget per episode
    double explored_substitution_threshold = 0.9;
    bool substitution_enabled = true;
    std::string substitution_file;    // optional role-equivalence table (JSON)

    // External planner adapter
    int adapter_timeout_ms = 30000;

    // Seeds
    std::uint64_t run_seed = 0;       // agent placement etc.
    std::uint64_t expert_run_seed = 0;

    // Evaluation
    int workers = 1;

    std::string to_json() const;                    // canonical form
    static Config from_json(const std::string& text);
    static Config load_file(const std::string& path);
    void validate() const;  // throws std::invalid_argument on bad values
};

}  // namespace eifsim
