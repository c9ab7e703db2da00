#include "attsim/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace attsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config: " + path + ": " + msg);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known) fail(path + "." + key, "unknown field");
    }
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

double num_or(const json& obj, const char* key, const std::string& path, double dflt) {
    if (!obj.contains(key)) return dflt;
    return as_number(obj.at(key), path + "." + key);
}

int int_or(const json& obj, const char* key, const std::string& path, int dflt) {
    if (!obj.contains(key)) return dflt;
    return as_int(obj.at(key), path + "." + key);
}

Vec2 as_vec2(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2)
        fail(path, "expected [x, y]");
    return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
}

Color parse_color(const json& j, const std::string& path) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "blue") return Color::Blue;
        if (s == "green") return Color::Green;
    }
    fail(path, "expected \"blue\" or \"green\"");
}

Orientation parse_orientation(const json& j, const std::string& path) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "deg45") return Orientation::Deg45;
        if (s == "deg135") return Orientation::Deg135;
    }
    fail(path, "expected \"deg45\" or \"deg135\"");
}

std::optional<DogParams> parse_kernel(const json& j, const std::string& path,
                                      std::optional<DogParams> dflt) {
    if (j.is_null()) return std::nullopt;
    expect_object(j, path);
    check_keys(j, path, {"a_exc", "sigma_exc", "a_inh", "sigma_inh", "radius"});
    DogParams base = dflt.value_or(DogParams{});
    DogParams p;
    p.a_exc = num_or(j, "a_exc", path, base.a_exc);
    p.sigma_exc = num_or(j, "sigma_exc", path, base.sigma_exc);
    p.a_inh = num_or(j, "a_inh", path, base.a_inh);
    p.sigma_inh = num_or(j, "sigma_inh", path, base.sigma_inh);
    p.radius = int_or(j, "radius", path, base.radius);
    return p;
}

void parse_model(const json& j, ModelConfig& m) {
    const std::string path = "model";
    expect_object(j, path);
    check_keys(j, path,
               {"grid", "dt", "tau", "kernels", "gains", "bias", "thresholds",
                "hold_steps", "refractory_steps", "switch_hold_steps", "sigma_stim"});

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        expect_object(g, path + ".grid");
        check_keys(g, path + ".grid", {"width", "height"});
        m.grid.width = int_or(g, "width", path + ".grid", m.grid.width);
        m.grid.height = int_or(g, "height", path + ".grid", m.grid.height);
    }
    m.dt = num_or(j, "dt", path, m.dt);

    if (j.contains("tau")) {
        const auto& t = j.at("tau");
        const std::string p = path + ".tau";
        expect_object(t, p);
        check_keys(t, p,
                   {"input", "v4", "saliency", "focus", "wm", "anticipation", "pf",
                    "it", "decision"});
        m.tau_input = num_or(t, "input", p, m.tau_input);
        m.tau_v4 = num_or(t, "v4", p, m.tau_v4);
        m.tau_saliency = num_or(t, "saliency", p, m.tau_saliency);
        m.tau_focus = num_or(t, "focus", p, m.tau_focus);
        m.tau_wm = num_or(t, "wm", p, m.tau_wm);
        m.tau_anticipation = num_or(t, "anticipation", p, m.tau_anticipation);
        m.tau_pf = num_or(t, "pf", p, m.tau_pf);
        m.tau_it = num_or(t, "it", p, m.tau_it);
        m.tau_decision = num_or(t, "decision", p, m.tau_decision);
    }

    if (j.contains("kernels")) {
        const auto& k = j.at("kernels");
        const std::string p = path + ".kernels";
        expect_object(k, p);
        check_keys(k, p, {"v4", "saliency", "focus", "wm", "anticipation"});
        if (k.contains("v4"))
            m.v4_kernel = parse_kernel(k.at("v4"), p + ".v4", m.v4_kernel);
        if (k.contains("saliency"))
            m.saliency_kernel =
                parse_kernel(k.at("saliency"), p + ".saliency", m.saliency_kernel);
        if (k.contains("focus"))
            m.focus_kernel = parse_kernel(k.at("focus"), p + ".focus", m.focus_kernel);
        if (k.contains("wm"))
            m.wm_kernel = parse_kernel(k.at("wm"), p + ".wm", m.wm_kernel);
        if (k.contains("anticipation"))
            m.anticipation_kernel = parse_kernel(k.at("anticipation"),
                                                 p + ".anticipation",
                                                 m.anticipation_kernel);
    }

    if (j.contains("gains")) {
        const auto& g = j.at("gains");
        const std::string p = path + ".gains";
        expect_object(g, p);
        check_keys(g, p,
                   {"input_v4", "pf_v4", "focus_v4", "v4_sal", "sal_focus", "focus_wm",
                    "wm_switch_inhibit", "it_readout", "move", "switch",
                    "anticipation", "lambda"});
        m.g_input_v4 = num_or(g, "input_v4", p, m.g_input_v4);
        m.g_pf_v4 = num_or(g, "pf_v4", p, m.g_pf_v4);
        m.g_focus_v4 = num_or(g, "focus_v4", p, m.g_focus_v4);
        m.g_v4_sal = num_or(g, "v4_sal", p, m.g_v4_sal);
        m.g_sal_focus = num_or(g, "sal_focus", p, m.g_sal_focus);
        m.g_focus_wm = num_or(g, "focus_wm", p, m.g_focus_wm);
        m.g_wm_switch_inhibit = num_or(g, "wm_switch_inhibit", p, m.g_wm_switch_inhibit);
        m.g_it_readout = num_or(g, "it_readout", p, m.g_it_readout);
        m.g_move = num_or(g, "move", p, m.g_move);
        m.g_switch = num_or(g, "switch", p, m.g_switch);
        m.g_anticipation = num_or(g, "anticipation", p, m.g_anticipation);
        m.lambda = num_or(g, "lambda", p, m.lambda);
    }

    if (j.contains("bias")) {
        const auto& b = j.at("bias");
        const std::string p = path + ".bias";
        expect_object(b, p);
        check_keys(b, p, {"focus", "wm"});
        m.bias_focus = num_or(b, "focus", p, m.bias_focus);
        m.bias_wm = num_or(b, "wm", p, m.bias_wm);
    }

    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        const std::string p = path + ".thresholds";
        expect_object(t, p);
        check_keys(t, p, {"move", "switch", "bubble"});
        m.theta_move = num_or(t, "move", p, m.theta_move);
        m.theta_switch = num_or(t, "switch", p, m.theta_switch);
        m.theta_bubble = num_or(t, "bubble", p, m.theta_bubble);
    }

    m.hold_steps = int_or(j, "hold_steps", path, m.hold_steps);
    m.refractory_steps = int_or(j, "refractory_steps", path, m.refractory_steps);
    m.switch_hold_steps = int_or(j, "switch_hold_steps", path, m.switch_hold_steps);
    m.sigma_stim = num_or(j, "sigma_stim", path, m.sigma_stim);
}

const std::set<std::string>& known_map_names() {
    static const std::set<std::string> names = {
        "input_blue", "input_green", "input_deg45", "input_deg135",
        "v4_blue",    "v4_green",    "v4_deg45",    "v4_deg135",
        "saliency",   "focus",       "wm",          "anticipation"};
    return names;
}

} // namespace

RunConfig parse_config(const json& j) {
    RunConfig c;
    expect_object(j, "(root)");
    check_keys(j, "(root)", {"model", "target", "scene", "limits", "output"});

    if (j.contains("model")) parse_model(j.at("model"), c.model);

    if (!j.contains("target")) fail("target", "required field is missing");
    {
        const auto& t = j.at("target");
        expect_object(t, "target");
        check_keys(t, "target", {"color", "orientation"});
        if (!t.contains("color")) fail("target.color", "required field is missing");
        if (!t.contains("orientation"))
            fail("target.orientation", "required field is missing");
        c.target.color = parse_color(t.at("color"), "target.color");
        c.target.orientation = parse_orientation(t.at("orientation"), "target.orientation");
    }

    if (!j.contains("scene")) fail("scene", "required field is missing");
    {
        const auto& s = j.at("scene");
        expect_object(s, "scene");
        check_keys(s, "scene", {"gaze", "stimuli"});
        if (s.contains("gaze")) c.gaze.center = as_vec2(s.at("gaze"), "scene.gaze");
        if (!s.contains("stimuli")) fail("scene.stimuli", "required field is missing");
        const auto& st = s.at("stimuli");
        if (!st.is_array()) fail("scene.stimuli", "expected an array");
        int i = 0;
        for (const auto& e : st) {
            const std::string p = "scene.stimuli[" + std::to_string(i++) + "]";
            expect_object(e, p);
            check_keys(e, p, {"pos", "color", "orientation"});
            if (!e.contains("pos")) fail(p + ".pos", "required field is missing");
            if (!e.contains("color")) fail(p + ".color", "required field is missing");
            if (!e.contains("orientation"))
                fail(p + ".orientation", "required field is missing");
            Stimulus stim;
            stim.world_pos = as_vec2(e.at("pos"), p + ".pos");
            stim.color = parse_color(e.at("color"), p + ".color");
            stim.orientation = parse_orientation(e.at("orientation"), p + ".orientation");
            c.world.stimuli.push_back(stim);
        }
    }

    if (j.contains("limits")) {
        const auto& l = j.at("limits");
        expect_object(l, "limits");
        check_keys(l, "limits",
                   {"max_attends", "max_steps", "attend_budget", "done_tolerance"});
        c.limits.max_attends = int_or(l, "max_attends", "limits", c.limits.max_attends);
        c.limits.max_steps = int_or(l, "max_steps", "limits", c.limits.max_steps);
        c.limits.attend_budget =
            int_or(l, "attend_budget", "limits", c.limits.attend_budget);
        c.limits.done_tolerance =
            num_or(l, "done_tolerance", "limits", c.limits.done_tolerance);
        if (c.limits.max_attends < 1) fail("limits.max_attends", "must be >= 1");
        if (c.limits.max_steps < 1) fail("limits.max_steps", "must be >= 1");
        if (c.limits.attend_budget < 1) fail("limits.attend_budget", "must be >= 1");
        if (!(c.limits.done_tolerance > 0.0))
            fail("limits.done_tolerance", "must be > 0");
    }

    if (j.contains("output")) {
        const auto& o = j.at("output");
        expect_object(o, "output");
        check_keys(o, "output", {"dir", "snapshot_every", "maps"});
        if (o.contains("dir")) {
            if (!o.at("dir").is_string()) fail("output.dir", "expected a string");
            c.output.dir = o.at("dir").get<std::string>();
        }
        c.output.snapshot_every =
            int_or(o, "snapshot_every", "output", c.output.snapshot_every);
        if (c.output.snapshot_every < 0) fail("output.snapshot_every", "must be >= 0");
        if (o.contains("maps")) {
            if (!o.at("maps").is_array()) fail("output.maps", "expected an array");
            c.output.maps.clear();
            for (const auto& e : o.at("maps")) {
                if (!e.is_string()) fail("output.maps", "expected strings");
                c.output.maps.push_back(e.get<std::string>());
            }
        }
        for (const auto& name : c.output.maps)
            if (!known_map_names().count(name))
                fail("output.maps", "unknown map '" + name + "'");
    }

    try {
        validate(c.model);
        validate(c.world);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

nlohmann::json to_json(const RunConfig& c) {
    const auto kernel_json = [](const std::optional<DogParams>& p) -> json {
        if (!p) return nullptr;
        return json{{"a_exc", p->a_exc},
                    {"sigma_exc", p->sigma_exc},
                    {"a_inh", p->a_inh},
                    {"sigma_inh", p->sigma_inh},
                    {"radius", p->radius}};
    };
    json stimuli = json::array();
    for (const auto& s : c.world.stimuli) {
        stimuli.push_back(
            {{"pos", {s.world_pos.x, s.world_pos.y}},
             {"color", s.color == Color::Blue ? "blue" : "green"},
             {"orientation",
              s.orientation == Orientation::Deg45 ? "deg45" : "deg135"}});
    }
    const ModelConfig& m = c.model;
    return json{
        {"model",
         {{"grid", {{"width", m.grid.width}, {"height", m.grid.height}}},
          {"dt", m.dt},
          {"tau",
           {{"input", m.tau_input},
            {"v4", m.tau_v4},
            {"saliency", m.tau_saliency},
            {"focus", m.tau_focus},
            {"wm", m.tau_wm},
            {"anticipation", m.tau_anticipation},
            {"pf", m.tau_pf},
            {"it", m.tau_it},
            {"decision", m.tau_decision}}},
          {"kernels",
           {{"v4", kernel_json(m.v4_kernel)},
            {"saliency", kernel_json(m.saliency_kernel)},
            {"focus", kernel_json(m.focus_kernel)},
            {"wm", kernel_json(m.wm_kernel)},
            {"anticipation", kernel_json(m.anticipation_kernel)}}},
          {"gains",
           {{"input_v4", m.g_input_v4},
            {"pf_v4", m.g_pf_v4},
            {"focus_v4", m.g_focus_v4},
            {"v4_sal", m.g_v4_sal},
            {"sal_focus", m.g_sal_focus},
            {"focus_wm", m.g_focus_wm},
            {"wm_switch_inhibit", m.g_wm_switch_inhibit},
            {"it_readout", m.g_it_readout},
            {"move", m.g_move},
            {"switch", m.g_switch},
            {"anticipation", m.g_anticipation},
            {"lambda", m.lambda}}},
          {"bias", {{"focus", m.bias_focus}, {"wm", m.bias_wm}}},
          {"thresholds",
           {{"move", m.theta_move},
            {"switch", m.theta_switch},
            {"bubble", m.theta_bubble}}},
          {"hold_steps", m.hold_steps},
          {"refractory_steps", m.refractory_steps},
          {"switch_hold_steps", m.switch_hold_steps},
          {"sigma_stim", m.sigma_stim}}},
        {"target",
         {{"color", c.target.color == Color::Blue ? "blue" : "green"},
          {"orientation",
           c.target.orientation == Orientation::Deg45 ? "deg45" : "deg135"}}},
        {"scene", {{"gaze", {c.gaze.center.x, c.gaze.center.y}}, {"stimuli", stimuli}}},
        {"limits",
         {{"max_attends", c.limits.max_attends},
          {"max_steps", c.limits.max_steps},
          {"attend_budget", c.limits.attend_budget},
          {"done_tolerance", c.limits.done_tolerance}}},
        {"output",
         {{"dir", c.output.dir.string()},
          {"snapshot_every", c.output.snapshot_every},
          {"maps", c.output.maps}}}};
}

} // namespace attsim
