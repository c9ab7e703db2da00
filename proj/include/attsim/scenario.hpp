#ifndef ATTSIM_SCENARIO_HPP
#define ATTSIM_SCENARIO_HPP

#include <array>
#include <vector>

#include "attsim/grid.hpp"

namespace attsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

enum class Color { Blue, Green };
enum class Orientation { Deg45, Deg135 };

// The four filtered input dimensions, in fixed index order.
enum class FeatureChannel { Blue = 0, Green = 1, Deg45 = 2, Deg135 = 3 };
inline constexpr int kNumChannels = 4;

inline FeatureChannel channel_of(Color c) {
    return c == Color::Blue ? FeatureChannel::Blue : FeatureChannel::Green;
}
inline FeatureChannel channel_of(Orientation o) {
    return o == Orientation::Deg45 ? FeatureChannel::Deg45 : FeatureChannel::Deg135;
}

// An oriented colored bar, idealized as a gaussian blob in its two channels.
struct Stimulus {
    Vec2 world_pos;
    Color color = Color::Blue;
    Orientation orientation = Orientation::Deg45;
};

struct World {
    std::vector<Stimulus> stimuli;
};

// Throws when two stimuli are closer than 3 world cells (rendered blobs
// must stay separable) or a coordinate is not finite.
void validate(const World& world);

// Tight world bounding box of the stimuli; degenerate when empty.
struct Box {
    Vec2 lo;
    Vec2 hi;
};
Box extent(const World& world);

// World coordinates currently imaged at the grid's foveal cell.
struct Gaze {
    Vec2 center;
};

// The grid midpoint cell the gaze center projects to.
inline Vec2 fovea(const Grid& g) {
    return {static_cast<double>(g.width / 2), static_cast<double>(g.height / 2)};
}

inline Vec2 retinal_position(Vec2 world_pos, const Gaze& gaze, const Grid& g) {
    return world_pos - gaze.center + fovea(g);
}

using ChannelImages = std::array<ActivityGrid, kNumChannels>;

// Renders each stimulus whose retinal position lies inside the grid as an
// amplitude-1 gaussian blob into its color channel and its orientation
// channel. Blobs sum where they overlap; channels are clamped to [0, 1].
ChannelImages render_channels(const World& world, const Gaze& gaze,
                              double sigma_stim, const Grid& grid);

inline Gaze apply_saccade(Gaze gaze, Vec2 v) { return Gaze{gaze.center + v}; }

} // namespace attsim

#endif
