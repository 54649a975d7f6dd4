#include "eifsim/featmap.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "eifsim/rng.hpp"
#include "eifsim/simulator.hpp"

namespace eifsim {

// ---------------------------------------------------------------------------
// Pixel feature fusion

PixelFeatures pixel_features(const Observation& obs, const EmbeddingTable& table) {
    PixelFeatures out;
    const int dim = table.dim();
    out.features = Eigen::MatrixXf::Zero(dim, obs.width * obs.height);
    out.global = FeatureVec::Zero(dim);

    // Visible object instances and their pixel areas (walls excluded: they are
    // structure, not instances, and would swamp the view-level feature).
    std::map<ObjectId, std::pair<CategoryId, int>> areas;
    for (int y = 0; y < obs.height; ++y)
        for (int x = 0; x < obs.width; ++x) {
            const ObjectId id = obs.instance(y, x);
            if (id <= kWallInstanceId) continue;
            auto& e = areas[id];
            e.first = obs.category(y, x);
            ++e.second;
        }

    std::map<ObjectId, float> alpha;
    if (!areas.empty()) {
        FeatureVec g_raw = FeatureVec::Zero(dim);
        for (const auto& [id, e] : areas) g_raw += static_cast<float>(e.second) * table.embed(e.first);
        out.global = normalized_or_zero(g_raw);

        // Instance fusion weights: softmax over cosine(instance embedding, g).
        Eigen::VectorXf sims(static_cast<int>(areas.size()));
        int k = 0;
        for (const auto& [id, e] : areas) sims[k++] = cosine(table.embed(e.first), out.global);
        const Eigen::VectorXf a = softmax(sims);
        k = 0;
        for (const auto& [id, e] : areas) {
            alpha[id] = a[k++];
            out.instance_ids.push_back(id);
            out.instance_alpha.push_back(alpha[id]);
        }
    }

    for (int y = 0; y < obs.height; ++y)
        for (int x = 0; x < obs.width; ++x) {
            const ObjectId id = obs.instance(y, x);
            if (id == kBackgroundId) continue;
            const int col = y * obs.width + x;
            if (id == kWallInstanceId) {
                out.features.col(col) = table.embed(kWallCategory);
            } else {
                const float a = alpha[id];
                out.features.col(col) = normalized_or_zero(
                    a * out.global + (1.0f - a) * table.embed(obs.category(y, x)));
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Top-down projection

FrameContribution project(const Observation& obs, const PixelFeatures& feats, int map_width,
                          int map_height, const Config& cfg) {
    FrameContribution contrib;
    const CameraRays rays = camera_rays(obs.width, obs.camera_heading, cfg.fov_deg);
    const double cs = cfg.cell_size;
    const double cam_x = (obs.camera_cell.x + 0.5) * cs;
    const double cam_y = (obs.camera_cell.y + 0.5) * cs;

    std::map<ObjectId, FrameContribution::Sighting> best_sighting;
    std::vector<std::uint8_t> free_mark(
        static_cast<std::size_t>(map_width) * static_cast<std::size_t>(map_height), 0);
    std::vector<std::uint8_t> obstacle_mark(free_mark.size(), 0);

    // Feature accumulation in row-major pixel order (the reference order for
    // the per-pixel oracle).
    for (int y = 0; y < obs.height; ++y)
        for (int x = 0; x < obs.width; ++x) {
            const float d = obs.depth(y, x);
            const ObjectId id = obs.instance(y, x);
            if (id == kBackgroundId || !std::isfinite(d)) continue;
            const double px = cam_x + rays.dir_x[static_cast<std::size_t>(x)] * d;
            const double py = cam_y + rays.dir_y[static_cast<std::size_t>(x)] * d;
            const int u = static_cast<int>(std::floor(px / cs));
            const int v = static_cast<int>(std::floor(py / cs));
            if (u < 0 || v < 0 || u >= map_width || v >= map_height) continue;
            const int cell = v * map_width + u;
            auto& entry = contrib.cells[cell];
            if (entry.hits == 0) entry.sum = FeatureVec::Zero(feats.features.rows());
            entry.sum += feats.features.col(y * obs.width + x);
            entry.hits += 1;

            if (category_info(obs.category(y, x)).blocking) obstacle_mark[static_cast<std::size_t>(cell)] = 1;

            if (id > kWallInstanceId) {
                auto it = best_sighting.find(id);
                if (it == best_sighting.end() || d < it->second.depth)
                    best_sighting[id] = {id, obs.category(y, x), cell, d};
            }
        }

    // Free-space carving along near-horizontal rows: cells fully crossed in
    // front of the hit (or out to max range on misses) are known free.
    const double half_tan_v = std::tan(cfg.fov_deg * 0.5 * M_PI / 180.0);
    const double carve_tan = std::tan(15.0 * M_PI / 180.0);
    for (int y = 0; y < obs.height; ++y) {
        const double tp = (obs.height * 0.5 - (y + 0.5)) / (obs.height * 0.5) * half_tan_v;
        if (std::abs(tp) > carve_tan) continue;
        for (int x = 0; x < obs.width; ++x) {
            const float d = obs.depth(y, x);
            const double limit = std::isfinite(d) ? d : cfg.max_range;
            const double dx = rays.dir_x[static_cast<std::size_t>(x)];
            const double dy = rays.dir_y[static_cast<std::size_t>(x)];
            int cx = obs.camera_cell.x;
            int cy = obs.camera_cell.y;
            const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
            const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
            const double inv_dx = dx != 0 ? 1.0 / dx : 0.0;
            const double inv_dy = dy != 0 ? 1.0 / dy : 0.0;
            double t_max_x = dx != 0 ? ((cx + (step_x > 0 ? 1 : 0)) * cs - cam_x) * inv_dx : 1e30;
            double t_max_y = dy != 0 ? ((cy + (step_y > 0 ? 1 : 0)) * cs - cam_y) * inv_dy : 1e30;
            const double t_delta_x = dx != 0 ? cs * std::abs(inv_dx) : 1e30;
            const double t_delta_y = dy != 0 ? cs * std::abs(inv_dy) : 1e30;
            while (true) {
                const double exit_t = std::min(t_max_x, t_max_y);
                if (exit_t > limit) break;
                if (cx < 0 || cy < 0 || cx >= map_width || cy >= map_height) break;
                free_mark[static_cast<std::size_t>(cy * map_width + cx)] = 1;
                if (t_max_x < t_max_y) {
                    cx += step_x;
                    t_max_x += t_delta_x;
                } else {
                    cy += step_y;
                    t_max_y += t_delta_y;
                }
            }
        }
    }

    for (std::size_t i = 0; i < free_mark.size(); ++i) {
        if (free_mark[i] && !obstacle_mark[i]) contrib.free_cells.push_back(static_cast<int>(i));
        if (obstacle_mark[i]) contrib.obstacle_cells.push_back(static_cast<int>(i));
    }
    for (const auto& [id, s] : best_sighting) contrib.sightings.push_back(s);
    return contrib;
}

// ---------------------------------------------------------------------------
// FeatureMap

FeatureMap::FeatureMap(int width, int height, int dim)
    : width_(width), height_(height), dim_(dim) {
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    feat_ = Eigen::MatrixXf::Zero(dim, static_cast<int>(n));
    hits_.assign(n, 0);
    occ_.assign(n, static_cast<std::uint8_t>(Occupancy::Unknown));
    heat_ = Eigen::VectorXf::Zero(static_cast<int>(n));
}

void FeatureMap::update(const FrameContribution& contribution, float w_raw) {
    if (!(w_raw >= 0.0f && w_raw <= 1.0f))
        throw std::invalid_argument("InvalidWeight: w_raw must be in [0,1]");

    weights_.push_back(w_raw);
    weight_sum_ += w_raw;
    ++timestep_;
    const double mean = weight_sum_ / static_cast<double>(weights_.size());
    float w = mean > 0.0 ? static_cast<float>(w_raw / mean) : 0.0f;
    w = std::clamp(w, 0.0f, 1.0f);
    last_weight_ = w;

    for (const auto& [cell, entry] : contribution.cells) {
        const FeatureVec f_norm = entry.sum / static_cast<float>(entry.hits);
        feat_.col(cell) = (1.0f - w) * feat_.col(cell) + w * f_norm;
        hits_[static_cast<std::size_t>(cell)] += entry.hits;
        heat_[cell] = w;
    }
    for (int cell : contribution.free_cells) {
        auto& o = occ_[static_cast<std::size_t>(cell)];
        if (o == static_cast<std::uint8_t>(Occupancy::Unknown))
            o = static_cast<std::uint8_t>(Occupancy::Free);
    }
    for (int cell : contribution.obstacle_cells)
        occ_[static_cast<std::size_t>(cell)] = static_cast<std::uint8_t>(Occupancy::Obstacle);

    for (const auto& s : contribution.sightings) {
        auto it = registry_.find(s.id);
        if (it == registry_.end()) {
            registry_[s.id] = {s.id, s.cat, cell_of(s.cell_index), timestep_, timestep_};
        } else {
            it->second.cell = cell_of(s.cell_index);
            it->second.last_step = timestep_;
        }
    }
}

const DiscoveredObject* FeatureMap::discovered(CategoryId cat) const {
    for (const auto& [id, d] : registry_)
        if (d.category == cat) return &d;
    return nullptr;
}

int FeatureMap::explored_free_cells() const {
    int n = 0;
    for (std::uint8_t o : occ_)
        if (o == static_cast<std::uint8_t>(Occupancy::Free)) ++n;
    return n;
}

void FeatureMap::save(std::ostream& os, double cell_size) const {
    const char magic[8] = {'E', 'I', 'F', 'M', 'A', 'P', '0', '1'};
    os.write(magic, 8);
    const std::int32_t w = width_, h = height_, d = dim_;
    os.write(reinterpret_cast<const char*>(&w), 4);
    os.write(reinterpret_cast<const char*>(&h), 4);
    os.write(reinterpret_cast<const char*>(&d), 4);
    os.write(reinterpret_cast<const char*>(&cell_size), 8);
    os.write(reinterpret_cast<const char*>(feat_.data()),
             static_cast<std::streamsize>(sizeof(float) * feat_.size()));
    os.write(reinterpret_cast<const char*>(hits_.data()),
             static_cast<std::streamsize>(sizeof(int) * hits_.size()));
    os.write(reinterpret_cast<const char*>(occ_.data()),
             static_cast<std::streamsize>(occ_.size()));
    const std::int32_t nw = static_cast<std::int32_t>(weights_.size());
    os.write(reinterpret_cast<const char*>(&nw), 4);
    os.write(reinterpret_cast<const char*>(weights_.data()),
             static_cast<std::streamsize>(sizeof(float) * weights_.size()));
}

FeatureMap FeatureMap::load(std::istream& is, double* cell_size_out) {
    char magic[8];
    is.read(magic, 8);
    if (std::string(magic, 8) != "EIFMAP01") throw std::invalid_argument("bad map snapshot header");
    std::int32_t w, h, d;
    double cs;
    is.read(reinterpret_cast<char*>(&w), 4);
    is.read(reinterpret_cast<char*>(&h), 4);
    is.read(reinterpret_cast<char*>(&d), 4);
    is.read(reinterpret_cast<char*>(&cs), 8);
    if (cell_size_out) *cell_size_out = cs;
    FeatureMap m(w, h, d);
    is.read(reinterpret_cast<char*>(m.feat_.data()),
            static_cast<std::streamsize>(sizeof(float) * m.feat_.size()));
    is.read(reinterpret_cast<char*>(m.hits_.data()),
            static_cast<std::streamsize>(sizeof(int) * m.hits_.size()));
    is.read(reinterpret_cast<char*>(m.occ_.data()), static_cast<std::streamsize>(m.occ_.size()));
    std::int32_t nw = 0;
    is.read(reinterpret_cast<char*>(&nw), 4);
    m.weights_.resize(static_cast<std::size_t>(nw));
    is.read(reinterpret_cast<char*>(m.weights_.data()),
            static_cast<std::streamsize>(sizeof(float) * m.weights_.size()));
    m.weight_sum_ = 0;
    for (float v : m.weights_) m.weight_sum_ += v;
    m.timestep_ = nw;
    return m;
}

// ---------------------------------------------------------------------------
// Frontier extraction

std::vector<Frontier> extract_frontiers(const FeatureMap& map, int threshold_cells,
                                        int token_count, int neighborhood_radius) {
    const int W = map.width();
    const int H = map.height();
    const auto& occ = map.occupancy_grid();
    auto occ_at = [&](int x, int y) -> Occupancy {
        if (x < 0 || y < 0 || x >= W || y >= H) return Occupancy::Unknown;
        return static_cast<Occupancy>(occ[static_cast<std::size_t>(y * W + x)]);
    };

    // Boundary mask: explored-free cells 8-adjacent to unknown.
    std::vector<std::uint8_t> boundary(occ.size(), 0);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            if (occ_at(x, y) != Occupancy::Free) continue;
            bool edge = false;
            for (int dy = -1; dy <= 1 && !edge; ++dy)
                for (int dx = -1; dx <= 1 && !edge; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (occ_at(x + dx, y + dy) == Occupancy::Unknown) edge = true;
                }
            if (edge) boundary[static_cast<std::size_t>(y * W + x)] = 1;
        }

    // 8-connected components, visited in row-major order.
    std::vector<Frontier> frontiers;
    std::vector<std::uint8_t> seen(occ.size(), 0);
    for (int start = 0; start < W * H; ++start) {
        if (!boundary[static_cast<std::size_t>(start)] || seen[static_cast<std::size_t>(start)])
            continue;
        Frontier f;
        std::deque<int> q{start};
        seen[static_cast<std::size_t>(start)] = 1;
        while (!q.empty()) {
            const int cur = q.front();
            q.pop_front();
            const int cx = cur % W;
            const int cy = cur / W;
            f.cells.push_back({cx, cy});
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int nx = cx + dx;
                    const int ny = cy + dy;
                    if (nx < 0 || ny < 0 || nx >= W || ny >= H) continue;
                    const int ni = ny * W + nx;
                    if (boundary[static_cast<std::size_t>(ni)] &&
                        !seen[static_cast<std::size_t>(ni)]) {
                        seen[static_cast<std::size_t>(ni)] = 1;
                        q.push_back(ni);
                    }
                }
        }
        f.area = static_cast<int>(f.cells.size());
        if (f.area < threshold_cells) continue;
        double sx = 0, sy = 0;
        for (const Cell& c : f.cells) {
            sx += c.x;
            sy += c.y;
        }
        f.centroid = {static_cast<int>(std::llround(sx / f.area)),
                      static_cast<int>(std::llround(sy / f.area))};
        frontiers.push_back(std::move(f));
    }

    std::sort(frontiers.begin(), frontiers.end(), [](const Frontier& a, const Frontier& b) {
        if (a.area != b.area) return a.area > b.area;
        if (a.centroid.x != b.centroid.x) return a.centroid.x < b.centroid.x;
        return a.centroid.y < b.centroid.y;
    });

    // Token sampling: feature-bearing explored cells within a Chebyshev
    // neighborhood of the component, uniform without replacement, padded by
    // repetition. Seeded by (map timestep, frontier id).
    for (std::size_t i = 0; i < frontiers.size(); ++i) {
        Frontier& f = frontiers[i];
        f.id = static_cast<int>(i);
        int min_x = W, min_y = H, max_x = -1, max_y = -1;
        for (const Cell& c : f.cells) {
            min_x = std::min(min_x, c.x);
            min_y = std::min(min_y, c.y);
            max_x = std::max(max_x, c.x);
            max_y = std::max(max_y, c.y);
        }
        // Chebyshev dilation of the component by the neighborhood radius,
        // restricted to the expanded bounding box.
        const int r = neighborhood_radius;
        const int bx0 = std::max(0, min_x - r), by0 = std::max(0, min_y - r);
        const int bx1 = std::min(W - 1, max_x + r), by1 = std::min(H - 1, max_y + r);
        const int bw = bx1 - bx0 + 1, bh = by1 - by0 + 1;
        std::vector<std::int16_t> dist(static_cast<std::size_t>(bw) * static_cast<std::size_t>(bh),
                                       -1);
        std::deque<std::pair<int, int>> dq;
        for (const Cell& c : f.cells) {
            dist[static_cast<std::size_t>((c.y - by0) * bw + (c.x - bx0))] = 0;
            dq.emplace_back(c.x, c.y);
        }
        while (!dq.empty()) {
            auto [cx, cy] = dq.front();
            dq.pop_front();
            const std::int16_t d0 = dist[static_cast<std::size_t>((cy - by0) * bw + (cx - bx0))];
            if (d0 >= r) continue;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = cx + dx, ny = cy + dy;
                    if (nx < bx0 || ny < by0 || nx > bx1 || ny > by1) continue;
                    auto& dn = dist[static_cast<std::size_t>((ny - by0) * bw + (nx - bx0))];
                    if (dn < 0) {
                        dn = static_cast<std::int16_t>(d0 + 1);
                        dq.emplace_back(nx, ny);
                    }
                }
        }
        std::vector<int> candidates;
        for (int y = by0; y <= by1; ++y)
            for (int x = bx0; x <= bx1; ++x)
                if (dist[static_cast<std::size_t>((y - by0) * bw + (x - bx0))] >= 0 &&
                    map.explored({x, y}))
                    candidates.push_back(y * W + x);

        f.tokens = Eigen::MatrixXf::Zero(map.dim(), token_count);
        if (!candidates.empty()) {
            SplitMix64 rng(mix_seed(0xF20421EEULL, static_cast<std::uint64_t>(map.timestep()),
                                    static_cast<std::uint64_t>(f.id)));
            std::vector<int> chosen;
            if (static_cast<int>(candidates.size()) <= token_count) {
                chosen = candidates;
            } else {
                // Partial Fisher-Yates.
                std::vector<int> pool = candidates;
                for (int k = 0; k < token_count; ++k) {
                    const std::size_t j =
                        static_cast<std::size_t>(k) + static_cast<std::size_t>(rng.uniform(
                                                          pool.size() - static_cast<std::size_t>(k)));
                    std::swap(pool[static_cast<std::size_t>(k)], pool[j]);
                    chosen.push_back(pool[static_cast<std::size_t>(k)]);
                }
            }
            for (int k = 0; k < token_count; ++k)
                f.tokens.col(k) = map.features().col(chosen[static_cast<std::size_t>(k) % chosen.size()]);
        }
    }
    return frontiers;
}

}  // namespace eifsim
