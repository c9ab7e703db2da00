#include "attsim/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <system_error>

#include <nlohmann/json.hpp>

namespace attsim {

namespace {

using nlohmann::json;

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

json vec_json(const std::optional<Vec2>& v) {
    if (!v) return nullptr;
    return json::array({v->x, v->y});
}

std::optional<Vec2> vec_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return Vec2{j.at(0).get<double>(), j.at(1).get<double>()};
}

EventKind kind_from_string(const std::string& s) {
    if (s == "covert_attend") return EventKind::CovertAttend;
    if (s == "switch") return EventKind::Switch;
    if (s == "saccade") return EventKind::Saccade;
    if (s == "done") return EventKind::Done;
    if (s == "budget") return EventKind::Budget;
    throw std::invalid_argument("trial log: unknown event kind '" + s + "'");
}

std::string step_tag(int step) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06d", step);
    return buf;
}

void dump_maps(const AttentionModel& model, const OutputConfig& out,
               const std::filesystem::path& dir, int step) {
    for (const auto& name : out.maps) {
        const MapId id = model.network().find_map(name);
        const ActivityGrid& u = model.network().map(id).u;
        const std::string base = name + "_step" + step_tag(step);
        write_file_atomic(dir / (base + ".pgm"), to_pgm(u));
        write_file_atomic(dir / (base + ".csv"), to_csv(u));
    }
}

} // namespace

std::string to_pgm(const ActivityGrid& g) {
    std::string out = "P5\n" + std::to_string(g.grid().width) + " " +
                      std::to_string(g.grid().height) + "\n255\n";
    out.reserve(out.size() + g.size());
    for (int i = 0; i < g.size(); ++i) {
        const double v = std::clamp(g[i], 0.0, 1.0);
        out.push_back(static_cast<char>(
            static_cast<unsigned char>(std::lround(255.0 * v))));
    }
    return out;
}

std::string to_csv(const ActivityGrid& g) {
    std::string out;
    for (int y = 0; y < g.grid().height; ++y) {
        for (int x = 0; x < g.grid().width; ++x) {
            if (x) out.push_back(',');
            append_double(out, g.at(x, y));
        }
        out.push_back('\n');
    }
    return out;
}

std::string to_csv(const std::vector<TraceSample>& trace) {
    std::string out = "step,move,switch\n";
    for (const auto& s : trace) {
        out += std::to_string(s.step);
        out.push_back(',');
        append_double(out, s.move_activity);
        out.push_back(',');
        append_double(out, s.switch_activity);
        out.push_back('\n');
    }
    return out;
}

json to_json(const TrialLog& log) {
    json events = json::array();
    for (const auto& e : log.events) {
        events.push_back({{"step", e.step},
                          {"kind", to_string(e.kind)},
                          {"retinal", vec_json(e.retinal)},
                          {"world", vec_json(e.world)},
                          {"move", e.move_activity},
                          {"switch", e.switch_activity}});
    }
    return json{{"events", events}};
}

TrialLog trial_log_from_json(const json& j) {
    TrialLog log;
    for (const auto& e : j.at("events")) {
        ScanEvent ev;
        ev.step = e.at("step").get<int>();
        ev.kind = kind_from_string(e.at("kind").get<std::string>());
        ev.retinal = vec_from_json(e.at("retinal"));
        ev.world = vec_from_json(e.at("world"));
        ev.move_activity = e.at("move").get<double>();
        ev.switch_activity = e.at("switch").get<double>();
        log.events.push_back(ev);
    }
    return log;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::filesystem::path effective_output_dir(const OutputConfig& out) {
    if (const char* env = std::getenv("ATTSIM_OUTPUT_DIR"); env && *env)
        return env;
    return out.dir;
}

int cmd_run(const RunConfig& config) {
    const std::filesystem::path dir = effective_output_dir(config.output);
    std::filesystem::create_directories(dir);

    AttentionModel model(config.model, config.target);
    if (config.output.snapshot_every > 0) {
        model.set_step_observer([&](const AttentionModel& m, int step) {
            if (step % config.output.snapshot_every == 0)
                dump_maps(m, config.output, dir, step);
        });
    }
    const TrialLog log = model.run_trial(config.world, config.gaze, config.limits);

    write_file_atomic(dir / "scanpath.json", to_json(log).dump(2) + "\n");
    write_file_atomic(dir / "trace.csv", to_csv(model.trace()));
    return log.done() ? 0 : 2;
}

int cmd_snapshot(const RunConfig& config, int step) {
    const std::filesystem::path dir = effective_output_dir(config.output);
    std::filesystem::create_directories(dir);

    AttentionModel model(config.model, config.target);
    bool dumped = false;
    model.set_step_observer([&](const AttentionModel& m, int s) {
        if (s == step) {
            dump_maps(m, config.output, dir, s);
            dumped = true;
        }
    });
    if (step == 0) { // initial state, before any dynamics
        model.present(config.world, config.gaze);
        dump_maps(model, config.output, dir, 0);
        return 0;
    }
    model.run_trial(config.world, config.gaze, config.limits);
    if (!dumped) {
        std::cerr << "snapshot: trial ended at step " << model.step_count()
                  << " before reaching step " << step << "; dumping final state\n";
        dump_maps(model, config.output, dir, model.step_count());
    }
    return 0;
}

} // namespace attsim
