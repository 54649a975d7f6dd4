#include "eifsim/pathfind.hpp"

namespace eifsim {

namespace {

Heading heading_for(Cell d) {
    if (d.x > 0) return Heading::East;
    if (d.x < 0) return Heading::West;
    if (d.y > 0) return Heading::North;
    return Heading::South;
}

}  // namespace

std::vector<MotionCmd> compile_motion_commands(const std::vector<Cell>& block_centers,
                                               Heading start) {
    std::vector<MotionCmd> cmds;
    Heading h = start;
    for (std::size_t i = 1; i < block_centers.size(); ++i) {
        const Cell d{block_centers[i].x - block_centers[i - 1].x,
                     block_centers[i].y - block_centers[i - 1].y};
        const Heading want = heading_for(d);
        const int diff = (static_cast<int>(want) - static_cast<int>(h) + 4) & 3;
        if (diff == 1) {
            cmds.push_back(MotionCmd::RotateRight);
        } else if (diff == 3) {
            cmds.push_back(MotionCmd::RotateLeft);
        } else if (diff == 2) {
            cmds.push_back(MotionCmd::RotateRight);
            cmds.push_back(MotionCmd::RotateRight);
        }
        h = want;
        cmds.push_back(MotionCmd::Forward);
    }
    return cmds;
}

}  // namespace eifsim
