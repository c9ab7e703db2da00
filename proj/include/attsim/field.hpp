#ifndef ATTSIM_FIELD_HPP
#define ATTSIM_FIELD_HPP

#include <optional>
#include <vector>

#include "attsim/grid.hpp"

namespace attsim {

// Tabulated difference-of-gaussians lateral weight profile w(dx, dy),
// truncated at |dx|,|dy| <= radius. A default-constructed kernel is the
// zero kernel (no lateral interaction).
struct LateralKernel {
    double a_exc = 0.0;
    double sigma_exc = 1.0;
    double a_inh = 0.0;
    double sigma_inh = 2.0;
    int radius = 0;
    std::vector<double> table = {0.0}; // (2*radius+1)^2 entries, row-major in dy

    double at(int dx, int dy) const {
        return table[(dy + radius) * (2 * radius + 1) + (dx + radius)];
    }
    bool is_zero() const { return zero_; }

    bool zero_ = true; // cached all-entries-zero flag, set by the factories
};

// w(d) = a_exc*exp(-|d|^2/(2 sigma_exc^2)) - a_inh*exp(-|d|^2/(2 sigma_inh^2)).
// Requires sigma_exc > 0, sigma_inh > sigma_exc, radius >= 1.
LateralKernel make_dog_kernel(double a_exc, double sigma_exc, double a_inh,
                              double sigma_inh, int radius);

// Pure gaussian spread kernel (no inhibitory lobe).
LateralKernel make_gaussian_kernel(double amp, double sigma, int radius);

struct StepParams {
    double dt = 0.1;
};

// One neural field: activity u(x), time constant tau, rectification bounds.
struct FieldMap {
    Grid grid;
    ActivityGrid u;
    double tau = 1.0;
    double u_min = 0.0;
    double u_max = 1.0;

    FieldMap() : FieldMap(Grid{}) {}
    explicit FieldMap(Grid g, double tau_ = 1.0)
        : grid(g), u(g), tau(tau_) {}
};

// L(x) = sum over |y-x|_inf <= radius of w(x-y) * u(y), zero outside the grid.
ActivityGrid lateral_term(const FieldMap& field, const LateralKernel& kernel);

// Same stencil applied to a raw activity buffer (used for afferent spreads).
ActivityGrid correlate(const ActivityGrid& u, const LateralKernel& kernel);

// u'(x) = clamp(u + (dt/tau) * (-u + L(x) + I(x)), u_min, u_max).
// Throws std::invalid_argument when dt/tau >= 1 or the input grid mismatches.
FieldMap euler_step(const FieldMap& field, const ActivityGrid& input,
                    const LateralKernel& kernel, StepParams params);
void euler_step_inplace(FieldMap& field, const ActivityGrid& input,
                        const LateralKernel& kernel, StepParams params);

// A thresholded activity bubble: activity-weighted centroid of one
// 4-connected component of {u >= threshold}, plus its maximum.
struct Peak {
    double x = 0.0;
    double y = 0.0;
    double amplitude = 0.0;
};

// Centroid of the component containing the global maximum, or nullopt when
// max u < threshold.
std::optional<Peak> decode_peak(const FieldMap& field, double threshold);

// All components of {u >= threshold}, in row-major discovery order.
std::vector<Peak> find_bubbles(const FieldMap& field, double threshold);

} // namespace attsim

#endif
