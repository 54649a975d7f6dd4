#pragma once

#include <iosfwd>
#include <map>
#include <unordered_map>
#include <vector>

#include "eifsim/config.hpp"
#include "eifsim/embed.hpp"
#include "eifsim/observation.hpp"
#include "eifsim/vecmath.hpp"

namespace eifsim {

// Per-observation fused pixel features (ConceptFusion-style: each pixel blends
// the global view feature with its instance's category embedding, weighted by
// how similar the instance is to the whole view).
struct PixelFeatures {
    Eigen::MatrixXf features;  // dim x (width*height), column index = y*width + x
    FeatureVec global;         // area-weighted mean of visible object embeddings
    std::vector<float> instance_alpha;  // fusion weight per visible instance (test hook)
    std::vector<ObjectId> instance_ids;
};

PixelFeatures pixel_features(const Observation& obs, const EmbeddingTable& table);

// One frame's additive contribution to the map: per-cell feature sums and hit
// counts exactly as the projection equation's indicator sum, plus occupancy
// deltas and instance sightings for the discovered-object registry.
struct FrameContribution {
    struct CellEntry {
        FeatureVec sum;
        int hits = 0;
    };
    std::unordered_map<int, CellEntry> cells;  // key: cell index y*W+x
    std::vector<int> free_cells;               // deduplicated
    std::vector<int> obstacle_cells;
    struct Sighting {
        ObjectId id;
        CategoryId cat;
        int cell_index;
        float depth;
    };
    std::vector<Sighting> sightings;  // one per visible instance (nearest pixel)

    bool empty() const { return cells.empty(); }
};

FrameContribution project(const Observation& obs, const PixelFeatures& feats, int map_width,
                          int map_height, const Config& cfg);

enum class Occupancy : std::uint8_t { Unknown = 0, Free = 1, Obstacle = 2 };

struct DiscoveredObject {
    ObjectId id;
    CategoryId category;
    Cell cell;       // most recent sighting, map frame
    int first_step;  // map timestep of discovery
    int last_step;
};

// Online top-down semantic feature map with dynamic-region-attention updates.
class FeatureMap {
public:
    FeatureMap(int width, int height, int dim);

    int width() const { return width_; }
    int height() const { return height_; }
    int dim() const { return dim_; }
    int timestep() const { return timestep_; }

    int cell_index(Cell c) const { return c.y * width_ + c.x; }
    Cell cell_of(int index) const { return {index % width_, index / width_}; }
    bool in_bounds(Cell c) const {
        return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
    }

    const Eigen::MatrixXf& features() const { return feat_; }
    Eigen::MatrixXf::ConstColXpr cell_feature(Cell c) const { return feat_.col(cell_index(c)); }
    int hit_count(Cell c) const { return hits_[static_cast<std::size_t>(cell_index(c))]; }
    bool explored(Cell c) const { return hit_count(c) > 0; }
    Occupancy occupancy(Cell c) const {
        return static_cast<Occupancy>(occ_[static_cast<std::size_t>(cell_index(c))]);
    }
    const std::vector<std::uint8_t>& occupancy_grid() const { return occ_; }
    const std::vector<float>& weight_history() const { return weights_; }
    const Eigen::VectorXf& attention_heat() const { return heat_; }

    // Dynamic region attention update: normalizes w_raw against the running
    // mean of the weight history (current step included), clamps to [0, 1],
    // and blends the per-cell normalized contribution into the map. Cells
    // without a contribution are untouched. Throws std::invalid_argument when
    // w_raw is outside [0, 1].
    void update(const FrameContribution& contribution, float w_raw);

    // Normalized weight that was applied at the most recent update.
    float last_applied_weight() const { return last_weight_; }

    const std::map<ObjectId, DiscoveredObject>& registry() const { return registry_; }
    const DiscoveredObject* discovered(CategoryId cat) const;  // lowest id of category

    int explored_free_cells() const;

    // Binary snapshot: header (W, H, dim, cell_size placeholder) + dense
    // float32 feature grid + hit counts + masks.
    void save(std::ostream& os, double cell_size) const;
    static FeatureMap load(std::istream& is, double* cell_size_out = nullptr);

private:
    int width_, height_, dim_;
    int timestep_ = 0;
    float last_weight_ = 0.0f;
    double weight_sum_ = 0.0;
    Eigen::MatrixXf feat_;  // dim x (W*H)
    std::vector<int> hits_;
    std::vector<std::uint8_t> occ_;
    std::vector<float> weights_;
    Eigen::VectorXf heat_;
    std::map<ObjectId, DiscoveredObject> registry_;
};

// Frontier: connected boundary component between explored-free and unknown.
struct Frontier {
    int id = 0;
    std::vector<Cell> cells;
    int area = 0;
    Cell centroid;
    Eigen::MatrixXf tokens;  // dim x token_count, sampled from the component's
                             // explored neighborhood on the map
};

// Boundary cells are explored-free cells 8-adjacent to unknown cells;
// components via 8-connectivity; components smaller than threshold_cells are
// dropped; output sorted by descending area (centroid lexicographic
// tie-break). Token sampling is seeded by (map timestep, frontier id).
std::vector<Frontier> extract_frontiers(const FeatureMap& map, int threshold_cells,
                                        int token_count, int neighborhood_radius);

inline std::vector<Frontier> extract_frontiers(const FeatureMap& map, const Config& cfg) {
    return extract_frontiers(map, cfg.frontier_threshold, cfg.frontier_tokens,
                             cfg.token_neighborhood_radius);
}

}  // namespace eifsim
