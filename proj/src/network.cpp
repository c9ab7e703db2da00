#include "attsim/network.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace attsim {

ActivityGrid remap_correlate(const FieldMap& memory, const FieldMap& displacement,
                             int center_x, int center_y) {
    if (!(memory.grid == displacement.grid))
        throw std::invalid_argument("remap_correlate: grid mismatch");
    const Grid& g = memory.grid;
    ActivityGrid out(g);
    for (int cy = 0; cy < g.height; ++cy) {
        for (int cx = 0; cx < g.width; ++cx) {
            const double d = displacement.u.at(cx, cy);
            if (d == 0.0) continue;
            const int sx = cx - center_x;
            const int sy = cy - center_y;
            // out(z) += d * memory(z + s), clipped to cells where z+s is in-grid
            const int x0 = std::max(0, -sx), x1 = std::min(g.width - 1, g.width - 1 - sx);
            const int y0 = std::max(0, -sy), y1 = std::min(g.height - 1, g.height - 1 - sy);
            for (int y = y0; y <= y1; ++y) {
                const double* mrow = memory.u.data() + (y + sy) * g.width + sx;
                double* orow = out.data() + y * g.width;
                for (int x = x0; x <= x1; ++x) orow[x] += d * mrow[x];
            }
        }
    }
    return out;
}

MapId Network::add_map(std::string name, Grid grid, double tau, LateralKernel kernel) {
    validate(grid);
    for (const auto& m : maps_)
        if (m.name == name)
            throw std::invalid_argument("add_map: duplicate map name '" + name + "'");
    MapEntry e{std::move(name), FieldMap(grid, tau), std::move(kernel), std::nullopt, 0.0};
    maps_.push_back(std::move(e));
    return MapId{static_cast<int>(maps_.size()) - 1};
}

UnitId Network::add_unit(std::string name, double tau) {
    for (const auto& u : units_)
        if (u.name == name)
            throw std::invalid_argument("add_unit: duplicate unit name '" + name + "'");
    units_.push_back(ScalarUnit{std::move(name), 0.0, tau, 0.0});
    return UnitId{static_cast<int>(units_.size()) - 1};
}

int Network::check(MapId id) const {
    if (id.index < 0 || id.index >= map_count())
        throw std::invalid_argument("unknown map id");
    return id.index;
}

int Network::check(UnitId id) const {
    if (id.index < 0 || id.index >= unit_count())
        throw std::invalid_argument("unknown unit id");
    return id.index;
}

MapId Network::find_map(std::string_view name) const {
    for (int i = 0; i < map_count(); ++i)
        if (maps_[i].name == name) return MapId{i};
    throw std::invalid_argument("unknown map name '" + std::string(name) + "'");
}

UnitId Network::find_unit(std::string_view name) const {
    for (int i = 0; i < unit_count(); ++i)
        if (units_[i].name == name) return UnitId{i};
    throw std::invalid_argument("unknown unit name '" + std::string(name) + "'");
}

void Network::connect(Projection p) {
    const bool to_map = std::holds_alternative<MapId>(p.target);
    const Grid* target_grid = nullptr;
    if (to_map)
        target_grid = &maps_[check(std::get<MapId>(p.target))].field.grid;
    else
        check(std::get<UnitId>(p.target));

    if (const auto* a = std::get_if<AfferentProjection>(&p.kind)) {
        const Grid& sg = maps_[check(a->source)].field.grid;
        if (to_map && !(sg == *target_grid))
            throw std::invalid_argument("connect: afferent grid mismatch");
        if (!to_map && a->spread)
            throw std::invalid_argument("connect: spread not supported on unit readouts");
    } else if (const auto* gp = std::get_if<GatedProjection>(&p.kind)) {
        if (!to_map)
            throw std::invalid_argument("connect: gated projections must target a map");
        const Grid& sg = maps_[check(gp->source)].field.grid;
        if (!(sg == *target_grid))
            throw std::invalid_argument("connect: gated grid mismatch");
        if (const auto* m = std::get_if<MapId>(&gp->modulator)) {
            if (!(maps_[check(*m)].field.grid == sg))
                throw std::invalid_argument("connect: modulator grid mismatch");
        } else {
            check(std::get<UnitId>(gp->modulator));
        }
    } else {
        const auto& r = std::get<RemapProjection>(p.kind);
        if (!to_map)
            throw std::invalid_argument("connect: remap projections must target a map");
        const Grid& mg = maps_[check(r.memory)].field.grid;
        if (!(maps_[check(r.displacement)].field.grid == mg) || !(mg == *target_grid))
            throw std::invalid_argument("connect: remap grid mismatch");
    }
    projections_.push_back(std::move(p));
}

void Network::set_external_input(MapId id, ActivityGrid input) {
    if (!(input.grid() == maps_[check(id)].field.grid))
        throw std::invalid_argument("set_external_input: grid mismatch");
    maps_[id.index].external = std::move(input);
}

void Network::clear_external_input(MapId id) {
    maps_[check(id)].external.reset();
}

void Network::accumulate(const Projection& p, ActivityGrid& into) const {
    if (const auto* a = std::get_if<AfferentProjection>(&p.kind)) {
        const ActivityGrid& src = maps_[a->source.index].field.u;
        if (a->spread) {
            ActivityGrid spread = correlate(src, *a->spread);
            add_scaled(into, spread, a->weight);
        } else {
            add_scaled(into, src, a->weight);
        }
    } else if (const auto* gp = std::get_if<GatedProjection>(&p.kind)) {
        const ActivityGrid& src = maps_[gp->source.index].field.u;
        if (const auto* m = std::get_if<MapId>(&gp->modulator)) {
            const ActivityGrid& mod = maps_[m->index].field.u;
            for (int i = 0; i < into.size(); ++i)
                into[i] += gp->weight * src[i] * mod[i];
        } else {
            const double mod = units_[std::get<UnitId>(gp->modulator).index].activity;
            for (int i = 0; i < into.size(); ++i)
                into[i] += gp->weight * src[i] * mod;
        }
    } else {
        const auto& r = std::get<RemapProjection>(p.kind);
        const FieldMap& mem = maps_[r.memory.index].field;
        const FieldMap& disp = maps_[r.displacement.index].field;
        ActivityGrid a = remap_correlate(mem, disp, mem.grid.width / 2, mem.grid.height / 2);
        add_scaled(into, a, r.weight);
    }
}

double Network::scalar_contribution(const Projection& p) const {
    const auto& a = std::get<AfferentProjection>(p.kind);
    return a.weight * maps_[a.source.index].field.u.max();
}

ActivityGrid Network::compute_input(MapId target) const {
    const MapEntry& e = maps_[check(target)];
    ActivityGrid acc(e.field.grid);
    for (const auto& p : projections_) {
        if (const auto* t = std::get_if<MapId>(&p.target); t && *t == target)
            accumulate(p, acc);
    }
    if (e.external) add_scaled(acc, *e.external, 1.0);
    if (e.bias != 0.0)
        for (int i = 0; i < acc.size(); ++i) acc[i] += e.bias;
    return acc;
}

double Network::compute_input(UnitId target) const {
    check(target);
    double acc = 0.0;
    for (const auto& p : projections_) {
        if (const auto* t = std::get_if<UnitId>(&p.target); t && *t == target)
            acc += scalar_contribution(p);
    }
    return acc + units_[target.index].external;
}

void Network::step(StepParams params) {
    // phase 1: all inputs from the time-t state
    std::vector<ActivityGrid> map_inputs;
    map_inputs.reserve(maps_.size());
    for (int i = 0; i < map_count(); ++i)
        map_inputs.push_back(compute_input(MapId{i}));
    std::vector<double> unit_inputs(units_.size(), 0.0);
    for (int i = 0; i < unit_count(); ++i)
        unit_inputs[i] = compute_input(UnitId{i});

    // phase 2: advance everything to t+dt
    for (int i = 0; i < map_count(); ++i)
        euler_step_inplace(maps_[i].field, map_inputs[i], maps_[i].kernel, params);
    for (int i = 0; i < unit_count(); ++i) {
        ScalarUnit& u = units_[i];
        const double r = params.dt / u.tau;
        if (!(r > 0.0) || r >= 1.0)
            throw std::invalid_argument("step: unit requires 0 < dt/tau < 1");
        u.activity = std::clamp(u.activity + r * (-u.activity + unit_inputs[i]), 0.0, 1.0);
    }
}

std::vector<std::string> Network::map_names() const {
    std::vector<std::string> out;
    out.reserve(maps_.size());
    for (const auto& m : maps_) out.push_back(m.name);
    return out;
}

} // namespace attsim
