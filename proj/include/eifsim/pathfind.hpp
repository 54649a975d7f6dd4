#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "eifsim/featmap.hpp"
#include "eifsim/scene.hpp"
#include "eifsim/types.hpp"

namespace eifsim {

// Occupancy views over the two sources of truth. The featmap view is what the
// agent plans against (unknown-optimistic); the scene view is ground truth for
// oracle paths, expert trajectories and feasibility checks.
struct MapOccView {
    const FeatureMap* map;
    int width() const { return map->width(); }
    int height() const { return map->height(); }
    bool obstacle(Cell c) const { return map->occupancy(c) == Occupancy::Obstacle; }
    bool unknown(Cell c) const { return map->occupancy(c) == Occupancy::Unknown; }
};

struct SceneOccView {
    const Scene* scene;
    int width() const { return scene->width; }
    int height() const { return scene->height; }
    bool obstacle(Cell c) const { return scene->blocked(c); }
    bool unknown(Cell) const { return false; }
};

struct CellPath {
    bool found = false;
    double cost = 0.0;
    std::vector<Cell> cells;  // from..to inclusive
};

inline constexpr double kUnknownCostFactor = 1.5;

// 4-connected A* over cells, unit step cost, unknown traversable at 1.5x.
// Deterministic tie-breaking on (f, g, cell index).
template <class View>
CellPath plan_cells(const View& view, Cell from, Cell to) {
    CellPath out;
    const int W = view.width();
    const int H = view.height();
    auto in_bounds = [&](Cell c) { return c.x >= 0 && c.y >= 0 && c.x < W && c.y < H; };
    if (!in_bounds(from) || !in_bounds(to) || view.obstacle(from) || view.obstacle(to)) return out;
    if (from == to) {
        out.found = true;
        out.cells = {from};
        return out;
    }

    const std::size_t n = static_cast<std::size_t>(W) * static_cast<std::size_t>(H);
    std::vector<double> g(n, 1e18);
    std::vector<int> parent(n, -1);
    std::vector<std::uint8_t> closed(n, 0);
    auto idx = [&](Cell c) { return static_cast<std::size_t>(c.y * W + c.x); };
    auto h = [&](Cell c) { return static_cast<double>(manhattan(c, to)); };

    struct QN {
        double f, g;
        int i;
        bool operator>(const QN& o) const {
            if (f != o.f) return f > o.f;
            if (g != o.g) return g > o.g;
            return i > o.i;
        }
    };
    std::priority_queue<QN, std::vector<QN>, std::greater<QN>> open;
    g[idx(from)] = 0;
    open.push({h(from), 0, static_cast<int>(idx(from))});
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    while (!open.empty()) {
        const QN cur = open.top();
        open.pop();
        const std::size_t ci = static_cast<std::size_t>(cur.i);
        if (closed[ci]) continue;
        closed[ci] = 1;
        const Cell c{cur.i % W, cur.i / W};
        if (c == to) break;
        for (int d = 0; d < 4; ++d) {
            const Cell nb{c.x + dx[d], c.y + dy[d]};
            if (!in_bounds(nb) || view.obstacle(nb)) continue;
            const std::size_t ni = idx(nb);
            if (closed[ni]) continue;
            const double step = view.unknown(nb) ? kUnknownCostFactor : 1.0;
            const double ng = g[ci] + step;
            if (ng < g[ni]) {
                g[ni] = ng;
                parent[ni] = cur.i;
                open.push({ng + h(nb), ng, static_cast<int>(ni)});
            }
        }
    }
    if (g[idx(to)] >= 1e18) return out;
    out.found = true;
    out.cost = g[idx(to)];
    int cur = static_cast<int>(idx(to));
    while (cur >= 0) {
        out.cells.push_back({cur % W, cur / W});
        cur = parent[static_cast<std::size_t>(cur)];
    }
    std::reverse(out.cells.begin(), out.cells.end());
    return out;
}

// Motion planning on the block lattice the agent actually moves on. A block
// is traversable when none of its cells is a known obstacle; it costs 1.5x
// when it still contains unknown cells (optimistic planning through
// unexplored space).
struct MotionPlan {
    bool found = false;
    double cost = 0.0;  // block steps (unknown-weighted)
    std::vector<Cell> block_centers;  // from..goal inclusive
    std::vector<MotionCmd> commands;
};

template <class View>
class BlockLattice {
public:
    explicit BlockLattice(const View& v)
        : view_(v), wb_(v.width() / kBlockCells), hb_(v.height() / kBlockCells) {}

    int wb() const { return wb_; }
    int hb() const { return hb_; }
    static Cell center(int bx, int by) {
        return {bx * kBlockCells + kBlockCells / 2, by * kBlockCells + kBlockCells / 2};
    }
    static std::pair<int, int> block_of(Cell c) { return {c.x / kBlockCells, c.y / kBlockCells}; }

    bool traversable(int bx, int by) const {
        if (bx < 0 || by < 0 || bx >= wb_ || by >= hb_) return false;
        for (int dy = 0; dy < kBlockCells; ++dy)
            for (int dx = 0; dx < kBlockCells; ++dx)
                if (view_.obstacle({bx * kBlockCells + dx, by * kBlockCells + dy})) return false;
        return true;
    }
    bool has_unknown(int bx, int by) const {
        for (int dy = 0; dy < kBlockCells; ++dy)
            for (int dx = 0; dx < kBlockCells; ++dx)
                if (view_.unknown({bx * kBlockCells + dx, by * kBlockCells + dy})) return true;
        return false;
    }

private:
    const View& view_;
    int wb_, hb_;
};

std::vector<MotionCmd> compile_motion_commands(const std::vector<Cell>& block_centers,
                                               Heading start);

template <class View>
MotionPlan plan_motion(const View& view, Cell from, Heading heading,
                       const std::vector<Cell>& goal_cells) {
    MotionPlan out;
    BlockLattice<View> lat(view);
    const int WB = lat.wb();
    const int HB = lat.hb();
    if (WB <= 0 || HB <= 0 || goal_cells.empty()) return out;
    auto [sx, sy] = BlockLattice<View>::block_of(from);
    if (!lat.traversable(sx, sy)) return out;

    std::vector<std::pair<int, int>> goals;
    for (const Cell& gcell : goal_cells) {
        auto [gx, gy] = BlockLattice<View>::block_of(gcell);
        if (lat.traversable(gx, gy)) goals.emplace_back(gx, gy);
    }
    if (goals.empty()) return out;

    auto h = [&](int bx, int by) {
        int best = 1 << 30;
        for (const auto& [gx, gy] : goals)
            best = std::min(best, std::abs(gx - bx) + std::abs(gy - by));
        return static_cast<double>(best);
    };
    auto is_goal = [&](int bx, int by) {
        for (const auto& [gx, gy] : goals)
            if (gx == bx && gy == by) return true;
        return false;
    };

    const std::size_t n = static_cast<std::size_t>(WB) * static_cast<std::size_t>(HB);
    std::vector<double> g(n, 1e18);
    std::vector<int> parent(n, -1);
    std::vector<std::uint8_t> closed(n, 0);
    auto idx = [&](int bx, int by) { return static_cast<std::size_t>(by * WB + bx); };

    struct QN {
        double f, g;
        int i;
        bool operator>(const QN& o) const {
            if (f != o.f) return f > o.f;
            if (g != o.g) return g > o.g;
            return i > o.i;
        }
    };
    std::priority_queue<QN, std::vector<QN>, std::greater<QN>> open;
    g[idx(sx, sy)] = 0;
    open.push({h(sx, sy), 0, static_cast<int>(idx(sx, sy))});
    int goal_idx = -1;
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    while (!open.empty()) {
        const QN cur = open.top();
        open.pop();
        const std::size_t ci = static_cast<std::size_t>(cur.i);
        if (closed[ci]) continue;
        closed[ci] = 1;
        const int bx = cur.i % WB;
        const int by = cur.i / WB;
        if (is_goal(bx, by)) {
            goal_idx = cur.i;
            break;
        }
        for (int d = 0; d < 4; ++d) {
            const int nx = bx + dx[d];
            const int ny = by + dy[d];
            if (!lat.traversable(nx, ny)) continue;
            const std::size_t ni = idx(nx, ny);
            if (closed[ni]) continue;
            const double step = lat.has_unknown(nx, ny) ? kUnknownCostFactor : 1.0;
            const double ng = g[ci] + step;
            if (ng < g[ni]) {
                g[ni] = ng;
                parent[ni] = cur.i;
                open.push({ng + h(nx, ny), ng, static_cast<int>(ni)});
            }
        }
    }
    if (goal_idx < 0) return out;
    out.found = true;
    out.cost = g[static_cast<std::size_t>(goal_idx)];
    int cur = goal_idx;
    while (cur >= 0) {
        out.block_centers.push_back(BlockLattice<View>::center(cur % WB, cur / WB));
        cur = parent[static_cast<std::size_t>(cur)];
    }
    std::reverse(out.block_centers.begin(), out.block_centers.end());
    out.commands = compile_motion_commands(out.block_centers, heading);
    return out;
}

// Bresenham line of sight; cells strictly between the endpoints must not be
// known obstacles.
template <class View>
bool line_of_sight(const View& view, Cell a, Cell b) {
    int x0 = a.x, y0 = a.y;
    const int x1 = b.x, y1 = b.y;
    const int dx = std::abs(x1 - x0);
    const int sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0);
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        if (!(x0 == a.x && y0 == a.y) && !(x0 == x1 && y0 == y1)) {
            if (view.obstacle({x0, y0})) return false;
        }
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
    return true;
}

}  // namespace eifsim
