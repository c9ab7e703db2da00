#include "attsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace attsim {

void validate(const World& world) {
    for (const auto& s : world.stimuli)
        if (!std::isfinite(s.world_pos.x) || !std::isfinite(s.world_pos.y))
            throw std::invalid_argument("world: stimulus coordinates must be finite");
    for (std::size_t i = 0; i < world.stimuli.size(); ++i) {
        for (std::size_t j = i + 1; j < world.stimuli.size(); ++j) {
            const Vec2 d = world.stimuli[i].world_pos - world.stimuli[j].world_pos;
            if (std::hypot(d.x, d.y) < 3.0)
                throw std::invalid_argument(
                    "world: stimuli must be at least 3 world cells apart");
        }
    }
}

Box extent(const World& world) {
    Box b{};
    if (world.stimuli.empty()) return b;
    b.lo = b.hi = world.stimuli.front().world_pos;
    for (const auto& s : world.stimuli) {
        b.lo.x = std::min(b.lo.x, s.world_pos.x);
        b.lo.y = std::min(b.lo.y, s.world_pos.y);
        b.hi.x = std::max(b.hi.x, s.world_pos.x);
        b.hi.y = std::max(b.hi.y, s.world_pos.y);
    }
    return b;
}

ChannelImages render_channels(const World& world, const Gaze& gaze,
                              double sigma_stim, const Grid& grid) {
    if (!(sigma_stim > 0.0))
        throw std::invalid_argument("render_channels: sigma_stim must be > 0");
    ChannelImages out{ActivityGrid(grid), ActivityGrid(grid), ActivityGrid(grid),
                      ActivityGrid(grid)};
    for (const auto& s : world.stimuli) {
        const Vec2 r = retinal_position(s.world_pos, gaze, grid);
        if (r.x < 0.0 || r.x > grid.width - 1 || r.y < 0.0 || r.y > grid.height - 1)
            continue;
        add_gaussian(out[static_cast<int>(channel_of(s.color))], r.x, r.y, 1.0, sigma_stim);
        add_gaussian(out[static_cast<int>(channel_of(s.orientation))], r.x, r.y, 1.0,
                     sigma_stim);
    }
    for (auto& ch : out)
        for (int i = 0; i < ch.size(); ++i) ch[i] = std::clamp(ch[i], 0.0, 1.0);
    return out;
}

} // namespace attsim
