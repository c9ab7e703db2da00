#include <cmath>
#include <random>

#include <doctest.h>

#include "attsim/field.hpp"

using namespace attsim;

namespace {

// Brute-force reference for the lateral interaction: plain quadruple loop
// over target and source cells, independent of the stencil implementation.
ActivityGrid lateral_oracle(const FieldMap& f, const LateralKernel& k) {
    ActivityGrid out(f.grid);
    for (int y = 0; y < f.grid.height; ++y)
        for (int x = 0; x < f.grid.width; ++x) {
            double acc = 0.0;
            for (int yy = 0; yy < f.grid.height; ++yy)
                for (int xx = 0; xx < f.grid.width; ++xx) {
                    const int dx = xx - x, dy = yy - y;
                    if (std::abs(dx) <= k.radius && std::abs(dy) <= k.radius)
                        acc += k.at(dx, dy) * f.u.at(xx, yy);
                }
            out.at(x, y) = acc;
        }
    return out;
}

ActivityGrid random_grid(Grid g, std::mt19937& rng, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    ActivityGrid out(g);
    for (int i = 0; i < out.size(); ++i) out[i] = dist(rng);
    return out;
}

} // namespace

TEST_CASE("dog kernel center value and tabulated formula") {
    const auto k = make_dog_kernel(1.0, 1.0, 0.5, 3.0, 5);
    CHECK(k.at(0, 0) == doctest::Approx(0.5).epsilon(1e-15)); // a_exc - a_inh
    // frozen from an independent evaluation of exp(-0.5) - 0.5*exp(-1/18)
    CHECK(std::abs(k.at(1, 0) - 0.13355092525925072) < 1e-15);
    CHECK_FALSE(k.is_zero());
}

TEST_CASE("dog kernel symmetry is exact for every tabulated offset") {
    const auto k = make_dog_kernel(1.3, 1.7, 0.4, 4.2, 7);
    for (int dy = -k.radius; dy <= k.radius; ++dy)
        for (int dx = -k.radius; dx <= k.radius; ++dx)
            CHECK(k.at(dx, dy) == k.at(-dx, -dy));
    CHECK(k.at(2, 3) == k.at(-2, -3));
}

TEST_CASE("dog kernel rejects invalid parameters") {
    CHECK_THROWS_AS(make_dog_kernel(1.0, 0.0, 0.5, 3.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(make_dog_kernel(1.0, 2.0, 0.5, 2.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(make_dog_kernel(1.0, 1.0, 0.5, 3.0, 0), std::invalid_argument);
}

TEST_CASE("lateral term of a zero field is zero") {
    FieldMap f(Grid{9, 9});
    const auto k = make_dog_kernel(1.0, 1.0, 0.5, 3.0, 3);
    const auto L = lateral_term(f, k);
    for (int i = 0; i < L.size(); ++i) CHECK(L[i] == 0.0);
}

TEST_CASE("lateral term of a unit impulse is the kernel table, cell-exactly") {
    const Grid g{11, 11};
    FieldMap f(g);
    const int cx = 4, cy = 7;
    f.u.at(cx, cy) = 1.0;
    const auto k = make_dog_kernel(1.0, 1.5, 0.3, 4.0, 5);
    const auto L = lateral_term(f, k);
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            const int dx = x - cx, dy = y - cy;
            const double expected =
                (std::abs(dx) <= k.radius && std::abs(dy) <= k.radius) ? k.at(dx, dy)
                                                                       : 0.0;
            CHECK(L.at(x, y) == expected);
        }
}

TEST_CASE("lateral term matches the quadruple-loop oracle on random fields") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        const Grid g{9, 9};
        FieldMap f(g);
        f.u = random_grid(g, rng);
        const auto k = make_dog_kernel(0.5 + trial * 0.1, 1.0 + 0.05 * trial, 0.4,
                                       3.0 + 0.1 * trial, 1 + trial % 5);
        const auto L = lateral_term(f, k);
        const auto O = lateral_oracle(f, k);
        for (int i = 0; i < L.size(); ++i)
            CHECK(std::abs(L[i] - O[i]) <= 1e-12 * std::max(1.0, std::abs(O[i])));
    }
}

TEST_CASE("euler step holds the fixed point u = I under a zero kernel") {
    const Grid g{8, 8};
    FieldMap f(g);
    std::mt19937 rng(7);
    f.u = random_grid(g, rng);
    const ActivityGrid input = f.u;
    const auto next = euler_step(f, input, LateralKernel{}, StepParams{0.1});
    for (int i = 0; i < next.u.size(); ++i) CHECK(next.u[i] == f.u[i]);
}

TEST_CASE("euler step follows the closed-form relaxation toward constant input") {
    const Grid g{40, 40};
    FieldMap f(g);
    ActivityGrid input(g, 0.6);
    // independent scalar iteration of the same recurrence, frozen values:
    //   n=1 -> 0.06, n=10 -> 0.39079293594000003
    f = euler_step(f, input, LateralKernel{}, StepParams{0.1});
    for (int i = 0; i < f.u.size(); ++i) CHECK(f.u[i] == doctest::Approx(0.06).epsilon(1e-14));
    for (int n = 1; n < 10; ++n)
        f = euler_step(f, input, LateralKernel{}, StepParams{0.1});
    CHECK(std::abs(f.u.at(3, 5) - 0.39079293594000003) < 1e-14);
    for (int n = 10; n < 100; ++n)
        f = euler_step(f, input, LateralKernel{}, StepParams{0.1});
    for (int i = 0; i < f.u.size(); ++i)
        CHECK(std::abs(f.u[i] - 0.6 * (1.0 - std::pow(0.9, 100))) < 1e-12);
}

TEST_CASE("euler step clamps to the rectification interval") {
    const Grid g{5, 5};
    FieldMap f(g);
    f.u.fill(0.4);
    ActivityGrid input(g, 1e6);
    const auto up = euler_step(f, input, LateralKernel{}, StepParams{0.1});
    for (int i = 0; i < up.u.size(); ++i) CHECK(up.u[i] == 1.0);
    input.fill(-1e6);
    const auto down = euler_step(f, input, LateralKernel{}, StepParams{0.1});
    for (int i = 0; i < down.u.size(); ++i) CHECK(down.u[i] == 0.0);
}

TEST_CASE("euler step rejects unstable dt/tau") {
    FieldMap f(Grid{4, 4});
    f.tau = 1.0;
    ActivityGrid input(f.grid);
    CHECK_THROWS_AS(euler_step(f, input, LateralKernel{}, StepParams{1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(euler_step(f, input, LateralKernel{}, StepParams{1.5}),
                    std::invalid_argument);
}

TEST_CASE("activities stay within bounds for arbitrary inputs and kernels") {
    std::mt19937 rng(99);
    const Grid g{12, 12};
    FieldMap f(g);
    const auto k = make_dog_kernel(2.0, 1.5, 1.0, 5.0, 6);
    for (int step = 0; step < 50; ++step) {
        const auto input = random_grid(g, rng, -2.0, 2.0);
        euler_step_inplace(f, input, k, StepParams{0.1});
        for (int i = 0; i < f.u.size(); ++i) {
            CHECK(f.u[i] >= 0.0);
            CHECK(f.u[i] <= 1.0);
            CHECK(std::isfinite(f.u[i]));
        }
    }
}

TEST_CASE("zero-kernel field converges to constant input within 10 tau") {
    const Grid g{16, 16};
    FieldMap f(g);
    ActivityGrid input(g, 0.37);
    const int steps = 100; // 10 * tau / dt
    for (int n = 0; n < steps; ++n)
        euler_step_inplace(f, input, LateralKernel{}, StepParams{0.1});
    for (int i = 0; i < f.u.size(); ++i)
        CHECK(std::abs(f.u[i] - 0.37) < 0.01 * 0.37);
}

TEST_CASE("decode_peak returns nothing on a flat field") {
    FieldMap f(Grid{10, 10});
    CHECK_FALSE(decode_peak(f, 0.1).has_value());
}

TEST_CASE("decode_peak centers a symmetric bubble") {
    FieldMap f(Grid{40, 40});
    add_gaussian(f.u, 10.0, 20.0, 0.9, 2.0);
    const auto p = decode_peak(f, 0.5);
    REQUIRE(p.has_value());
    CHECK(std::abs(p->x - 10.0) < 0.1);
    CHECK(std::abs(p->y - 20.0) < 0.1);
    CHECK(p->amplitude == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("decode_peak picks the component holding the global maximum") {
    FieldMap f(Grid{40, 40});
    add_gaussian(f.u, 5.0, 5.0, 0.9, 1.5);
    add_gaussian(f.u, 30.0, 30.0, 0.6, 1.5);
    const auto p = decode_peak(f, 0.5);
    REQUIRE(p.has_value());
    CHECK(std::abs(p->x - 5.0) < 0.5);
    CHECK(std::abs(p->y - 5.0) < 0.5);

    // independent oracle: argmax plus breadth-first component labeling
    int bx = 0, by = 0;
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 40; ++x)
            if (f.u.at(x, y) > f.u.at(bx, by)) { bx = x; by = y; }
    std::vector<char> seen(40 * 40, 0);
    std::vector<std::pair<int, int>> queue{{bx, by}};
    seen[by * 40 + bx] = 1;
    double mass = 0, mx = 0, my = 0;
    while (!queue.empty()) {
        auto [x, y] = queue.back();
        queue.pop_back();
        mass += f.u.at(x, y);
        mx += f.u.at(x, y) * x;
        my += f.u.at(x, y) * y;
        const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (auto [ox, oy] : nb) {
            const int nx = x + ox, ny = y + oy;
            if (nx < 0 || ny < 0 || nx >= 40 || ny >= 40) continue;
            if (!seen[ny * 40 + nx] && f.u.at(nx, ny) >= 0.5) {
                seen[ny * 40 + nx] = 1;
                queue.emplace_back(nx, ny);
            }
        }
    }
    CHECK(p->x == doctest::Approx(mx / mass).epsilon(1e-12));
    CHECK(p->y == doctest::Approx(my / mass).epsilon(1e-12));

    const auto bubbles = find_bubbles(f, 0.5);
    CHECK(bubbles.size() == 2);
}
