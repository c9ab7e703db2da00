#ifndef ATTSIM_NETWORK_HPP
#define ATTSIM_NETWORK_HPP

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "attsim/field.hpp"

namespace attsim {

struct MapId {
    int index = -1;
    friend bool operator==(const MapId&, const MapId&) = default;
};
struct UnitId {
    int index = -1;
    friend bool operator==(const UnitId&, const UnitId&) = default;
};
using NodeRef = std::variant<MapId, UnitId>;

// The three input forms a map or unit can receive. Afferent adds a weighted
// (optionally gaussian-spread) copy of the source; into a scalar unit it
// reads the source's spatial maximum. Gated multiplies the source cell-wise
// by a modulator map, or broadcasts a scalar unit modulator. Remap correlates
// a memory map with a displacement map anchored at the grid center.
struct AfferentProjection {
    MapId source;
    double weight = 1.0;
    std::optional<LateralKernel> spread;
};
struct GatedProjection {
    MapId source;
    NodeRef modulator;
    double weight = 1.0;
};
struct RemapProjection {
    MapId memory;
    MapId displacement;
    double weight = 1.0;
};

struct Projection {
    std::variant<AfferentProjection, GatedProjection, RemapProjection> kind;
    NodeRef target;
};

// Leaky integrator with activity clamped to [0, 1].
struct ScalarUnit {
    std::string name;
    double activity = 0.0;
    double tau = 1.0;
    double external = 0.0;
};

// A(z) = sum_c memory(z + (c - center)) * displacement(c), memory read as
// zero outside its grid. A point-mass displacement at cell c therefore
// shifts the memory by -(c - center).
ActivityGrid remap_correlate(const FieldMap& memory, const FieldMap& displacement,
                             int center_x, int center_y);

// Projection graph over named maps and scalar units with a synchronous,
// deterministic scheduler: all inputs for one step are computed from the
// pre-step state before any state advances.
class Network {
public:
    MapId add_map(std::string name, Grid grid, double tau = 1.0,
                  LateralKernel kernel = {});
    UnitId add_unit(std::string name, double tau = 1.0);

    // Appends to the ordered projection list; throws on unknown ids,
    // grid mismatches, or an unsupported kind/target combination.
    void connect(Projection p);

    int map_count() const { return static_cast<int>(maps_.size()); }
    int unit_count() const { return static_cast<int>(units_.size()); }

    MapId find_map(std::string_view name) const;
    UnitId find_unit(std::string_view name) const;

    FieldMap& map(MapId id) { return maps_[check(id)].field; }
    const FieldMap& map(MapId id) const { return maps_[check(id)].field; }
    const LateralKernel& kernel(MapId id) const { return maps_[check(id)].kernel; }
    const std::string& name(MapId id) const { return maps_[check(id)].name; }
    ScalarUnit& unit(UnitId id) { return units_[check(id)]; }
    const ScalarUnit& unit(UnitId id) const { return units_[check(id)]; }

    // External drive persists until replaced; it adds to the projection sum.
    void set_external_input(MapId id, ActivityGrid input);
    void clear_external_input(MapId id);
    void set_external_drive(UnitId id, double drive) { units_[check(id)].external = drive; }

    // Constant resting drive h added uniformly to the map's input. A negative
    // h gives the field an ignition threshold: without it, the excitatory
    // kernel lobe amplifies arbitrarily small seeds.
    void set_bias(MapId id, double h) { maps_[check(id)].bias = h; }
    double bias(MapId id) const { return maps_[check(id)].bias; }

    // I for one target, evaluated on current activities; no state change.
    ActivityGrid compute_input(MapId target) const;
    double compute_input(UnitId target) const;

    void step(StepParams params);

    const std::vector<Projection>& projections() const { return projections_; }
    std::vector<std::string> map_names() const;

private:
    struct MapEntry {
        std::string name;
        FieldMap field;
        LateralKernel kernel;
        std::optional<ActivityGrid> external;
        double bias = 0.0;
    };

    int check(MapId id) const;
    int check(UnitId id) const;
    void accumulate(const Projection& p, ActivityGrid& into) const;
    double scalar_contribution(const Projection& p) const;

    std::vector<MapEntry> maps_;
    std::vector<ScalarUnit> units_;
    std::vector<Projection> projections_;
};

} // namespace attsim

#endif
