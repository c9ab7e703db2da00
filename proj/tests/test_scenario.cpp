#include <cmath>

#include <doctest.h>

#include "attsim/scenario.hpp"

using namespace attsim;

namespace {
const Grid g40{40, 40};
}

TEST_CASE("an empty world renders four zero channels") {
    const auto ch = render_channels(World{}, Gaze{}, 1.5, g40);
    for (const auto& c : ch)
        for (int i = 0; i < c.size(); ++i) CHECK(c[i] == 0.0);
}

TEST_CASE("a stimulus feeds exactly its color and orientation channels") {
    World w;
    w.stimuli.push_back({{0.0, 0.0}, Color::Blue, Orientation::Deg45});
    const auto ch = render_channels(w, Gaze{}, 1.5, g40);
    const auto& blue = ch[static_cast<int>(FeatureChannel::Blue)];
    const auto& d45 = ch[static_cast<int>(FeatureChannel::Deg45)];
    const auto& green = ch[static_cast<int>(FeatureChannel::Green)];
    const auto& d135 = ch[static_cast<int>(FeatureChannel::Deg135)];
    CHECK(blue == d45);                    // equal centered blobs
    CHECK(blue.at(20, 20) == 1.0);         // fovea images the gaze center
    for (int i = 0; i < green.size(); ++i) {
        CHECK(green[i] == 0.0);
        CHECK(d135[i] == 0.0);
    }
}

TEST_CASE("shifting the gaze shifts the rendering the opposite way, cell-exactly") {
    World w;
    w.stimuli.push_back({{3.0, -2.0}, Color::Green, Orientation::Deg135});
    const auto base = render_channels(w, Gaze{{0.0, 0.0}}, 1.5, g40);
    for (const Vec2 d : {Vec2{5.0, 0.0}, Vec2{-3.0, 4.0}}) {
        const auto moved = render_channels(w, Gaze{d}, 1.5, g40);
        const auto& b = base[static_cast<int>(FeatureChannel::Green)];
        const auto& m = moved[static_cast<int>(FeatureChannel::Green)];
        const int dx = static_cast<int>(d.x), dy = static_cast<int>(d.y);
        for (int y = 0; y < 40; ++y)
            for (int x = 0; x < 40; ++x)
                if (g40.contains(x + dx, y + dy)) CHECK(m.at(x, y) == b.at(x + dx, y + dy));
    }
}

TEST_CASE("the world extent is the tight bounding box of its stimuli") {
    World w;
    w.stimuli.push_back({{3.0, -2.0}, Color::Blue, Orientation::Deg45});
    w.stimuli.push_back({{-7.5, 4.0}, Color::Green, Orientation::Deg135});
    const Box b = extent(w);
    CHECK(b.lo == Vec2{-7.5, -2.0});
    CHECK(b.hi == Vec2{3.0, 4.0});
}

TEST_CASE("stimuli outside the grid contribute nothing") {
    World w;
    w.stimuli.push_back({{100.0, 0.0}, Color::Blue, Orientation::Deg45});
    const auto ch = render_channels(w, Gaze{}, 1.5, g40);
    for (const auto& c : ch)
        for (int i = 0; i < c.size(); ++i) CHECK(c[i] == 0.0);
}

TEST_CASE("overlapping blobs sum and clamp at one") {
    World w;
    w.stimuli.push_back({{0.0, 0.0}, Color::Blue, Orientation::Deg45});
    w.stimuli.push_back({{3.5, 0.0}, Color::Blue, Orientation::Deg135});
    const auto ch = render_channels(w, Gaze{}, 2.5, g40);
    const auto& blue = ch[static_cast<int>(FeatureChannel::Blue)];
    double peak = 0.0;
    for (int i = 0; i < blue.size(); ++i) {
        CHECK(blue[i] <= 1.0);
        peak = std::max(peak, blue[i]);
    }
    CHECK(peak == 1.0);
}

TEST_CASE("apply_saccade displaces the gaze center") {
    CHECK(apply_saccade(Gaze{{0.0, 0.0}}, {0.0, 0.0}).center == Vec2{0.0, 0.0});
    CHECK(apply_saccade(Gaze{{0.0, 0.0}}, {10.0, -3.0}).center == Vec2{10.0, -3.0});
}

TEST_CASE("a saccade of exactly the retinal offset foveates the stimulus") {
    World w;
    w.stimuli.push_back({{10.0, -3.0}, Color::Blue, Orientation::Deg45});
    Gaze gaze{{0.0, 0.0}};
    gaze = apply_saccade(gaze, w.stimuli[0].world_pos - gaze.center);
    const auto ch = render_channels(w, gaze, 1.5, g40);
    const auto& blue = ch[static_cast<int>(FeatureChannel::Blue)];
    int bx = 0, by = 0;
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 40; ++x)
            if (blue.at(x, y) > blue.at(bx, by)) { bx = x; by = y; }
    CHECK(bx == 20);
    CHECK(by == 20);
    CHECK(blue.at(20, 20) == 1.0);
}

TEST_CASE("worlds with stimuli closer than 3 cells are rejected") {
    World w;
    w.stimuli.push_back({{0.0, 0.0}, Color::Blue, Orientation::Deg45});
    w.stimuli.push_back({{1.0, 1.0}, Color::Green, Orientation::Deg135});
    CHECK_THROWS_AS(validate(w), std::invalid_argument);
    w.stimuli[1].world_pos = {4.0, 0.0};
    CHECK_NOTHROW(validate(w));
}
