#include "attsim/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace attsim {

double ActivityGrid::max() const {
    double m = v_.empty() ? 0.0 : v_[0];
    for (double x : v_) m = std::max(m, x);
    return m;
}

void add_scaled(ActivityGrid& a, const ActivityGrid& b, double s) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("add_scaled: grid mismatch");
    for (int i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

void add_gaussian(ActivityGrid& g, double cx, double cy, double amp, double sigma) {
    const double inv = 1.0 / (2.0 * sigma * sigma);
    const Grid& gr = g.grid();
    for (int y = 0; y < gr.height; ++y) {
        for (int x = 0; x < gr.width; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            g.at(x, y) += amp * std::exp(-(dx * dx + dy * dy) * inv);
        }
    }
}

static void refresh_zero_flag(LateralKernel& k) {
    k.zero_ = std::all_of(k.table.begin(), k.table.end(),
                          [](double w) { return w == 0.0; });
}

LateralKernel make_dog_kernel(double a_exc, double sigma_exc, double a_inh,
                              double sigma_inh, int radius) {
    if (!(sigma_exc > 0.0))
        throw std::invalid_argument("make_dog_kernel: sigma_exc must be > 0");
    if (!(sigma_inh > sigma_exc))
        throw std::invalid_argument("make_dog_kernel: sigma_inh must be > sigma_exc");
    if (radius < 1)
        throw std::invalid_argument("make_dog_kernel: radius must be >= 1");

    LateralKernel k;
    k.a_exc = a_exc;
    k.sigma_exc = sigma_exc;
    k.a_inh = a_inh;
    k.sigma_inh = sigma_inh;
    k.radius = radius;
    const int side = 2 * radius + 1;
    k.table.assign(static_cast<std::size_t>(side) * side, 0.0);
    const double ie = 1.0 / (2.0 * sigma_exc * sigma_exc);
    const double ii = 1.0 / (2.0 * sigma_inh * sigma_inh);
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            // evaluated on |d|^2 so w(d) == w(-d) holds exactly
            const double d2 = static_cast<double>(dx * dx + dy * dy);
            k.table[(dy + radius) * side + (dx + radius)] =
                a_exc * std::exp(-d2 * ie) - a_inh * std::exp(-d2 * ii);
        }
    }
    refresh_zero_flag(k);
    return k;
}

LateralKernel make_gaussian_kernel(double amp, double sigma, int radius) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("make_gaussian_kernel: sigma must be > 0");
    if (radius < 1)
        throw std::invalid_argument("make_gaussian_kernel: radius must be >= 1");

    LateralKernel k;
    k.a_exc = amp;
    k.sigma_exc = sigma;
    k.radius = radius;
    const int side = 2 * radius + 1;
    k.table.assign(static_cast<std::size_t>(side) * side, 0.0);
    const double ie = 1.0 / (2.0 * sigma * sigma);
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            k.table[(dy + radius) * side + (dx + radius)] =
                amp * std::exp(-static_cast<double>(dx * dx + dy * dy) * ie);
    refresh_zero_flag(k);
    return k;
}

ActivityGrid correlate(const ActivityGrid& u, const LateralKernel& kernel) {
    const Grid& g = u.grid();
    ActivityGrid out(g);
    if (kernel.is_zero()) return out;

    const int r = kernel.radius;
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            double acc = 0.0;
            const int dy0 = std::max(-r, -y);
            const int dy1 = std::min(r, g.height - 1 - y);
            for (int dy = dy0; dy <= dy1; ++dy) {
                const double* urow = u.data() + (y + dy) * g.width;
                const double* wrow =
                    kernel.table.data() + (dy + r) * (2 * r + 1) + r;
                const int dx0 = std::max(-r, -x);
                const int dx1 = std::min(r, g.width - 1 - x);
                for (int dx = dx0; dx <= dx1; ++dx)
                    acc += wrow[dx] * urow[x + dx];
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

ActivityGrid lateral_term(const FieldMap& field, const LateralKernel& kernel) {
    return correlate(field.u, kernel);
}

void euler_step_inplace(FieldMap& field, const ActivityGrid& input,
                        const LateralKernel& kernel, StepParams params) {
    if (!(input.grid() == field.grid))
        throw std::invalid_argument("euler_step: input grid mismatch");
    const double r = params.dt / field.tau;
    if (!(r > 0.0) || r >= 1.0)
        throw std::invalid_argument("euler_step: requires 0 < dt/tau < 1");

    const ActivityGrid lat = lateral_term(field, kernel);
    for (int i = 0; i < field.u.size(); ++i) {
        const double du = -field.u[i] + lat[i] + input[i];
        field.u[i] = std::clamp(field.u[i] + r * du, field.u_min, field.u_max);
    }
}

FieldMap euler_step(const FieldMap& field, const ActivityGrid& input,
                    const LateralKernel& kernel, StepParams params) {
    FieldMap next = field;
    euler_step_inplace(next, input, kernel, params);
    return next;
}

namespace {

// Flood fill of {u >= threshold} with 4-connectivity; returns the centroid
// and maximum of the component seeded at (sx, sy).
Peak flood_component(const FieldMap& field, double threshold, int sx, int sy,
                     std::vector<char>& visited) {
    const Grid& g = field.grid;
    std::vector<std::pair<int, int>> stack{{sx, sy}};
    visited[g.index(sx, sy)] = 1;
    double mass = 0.0, mx = 0.0, my = 0.0, amp = field.u.at(sx, sy);
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        const double v = field.u.at(x, y);
        mass += v;
        mx += v * x;
        my += v * y;
        amp = std::max(amp, v);
        constexpr int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (auto [ox, oy] : nb) {
            const int nx = x + ox, ny = y + oy;
            if (!g.contains(nx, ny) || visited[g.index(nx, ny)]) continue;
            if (field.u.at(nx, ny) >= threshold) {
                visited[g.index(nx, ny)] = 1;
                stack.emplace_back(nx, ny);
            }
        }
    }
    Peak p;
    p.amplitude = amp;
    if (mass > 0.0) {
        p.x = mx / mass;
        p.y = my / mass;
    } else { // degenerate: all component cells at exactly 0
        p.x = sx;
        p.y = sy;
    }
    return p;
}

} // namespace

std::vector<Peak> find_bubbles(const FieldMap& field, double threshold) {
    const Grid& g = field.grid;
    std::vector<char> visited(g.cells(), 0);
    std::vector<Peak> out;
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x)
            if (!visited[g.index(x, y)] && field.u.at(x, y) >= threshold)
                out.push_back(flood_component(field, threshold, x, y, visited));
    return out;
}

std::optional<Peak> decode_peak(const FieldMap& field, double threshold) {
    const Grid& g = field.grid;
    int bx = 0, by = 0;
    double best = field.u.at(0, 0);
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            if (field.u.at(x, y) > best) {
                best = field.u.at(x, y);
                bx = x;
                by = y;
            }
        }
    }
    if (best < threshold) return std::nullopt;
    std::vector<char> visited(g.cells(), 0);
    return flood_component(field, threshold, bx, by, visited);
}

} // namespace attsim
