#include "attsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace attsim {

namespace {

const char* channel_name(FeatureChannel f) {
    switch (f) {
        case FeatureChannel::Blue: return "blue";
        case FeatureChannel::Green: return "green";
        case FeatureChannel::Deg45: return "deg45";
        case FeatureChannel::Deg135: return "deg135";
    }
    return "?";
}

void check_finite(double v, const char* field) {
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string("model config: ") + field +
                                    " must be finite");
}

void check_tau(double dt, double tau, const char* field) {
    if (!(tau > 0.0) || !(dt / tau < 1.0))
        throw std::invalid_argument(std::string("model config: ") + field +
                                    " violates the stability bound dt/tau < 1");
}

void check_threshold(double v, const char* field) {
    if (!(v > 0.0) || !(v < 1.0))
        throw std::invalid_argument(std::string("model config: ") + field +
                                    " must lie in (0, 1)");
}

} // namespace

LateralKernel build_kernel(const DogParams& p) {
    const int radius =
        p.radius > 0 ? p.radius : static_cast<int>(std::ceil(3.0 * p.sigma_inh));
    return make_dog_kernel(p.a_exc, p.sigma_exc, p.a_inh, p.sigma_inh, radius);
}

void validate(const ModelConfig& c) {
    validate(c.grid);
    if (!(c.dt > 0.0))
        throw std::invalid_argument("model config: dt must be > 0");
    check_tau(c.dt, c.tau_input, "tau_input");
    check_tau(c.dt, c.tau_v4, "tau_v4");
    check_tau(c.dt, c.tau_saliency, "tau_saliency");
    check_tau(c.dt, c.tau_focus, "tau_focus");
    check_tau(c.dt, c.tau_wm, "tau_wm");
    check_tau(c.dt, c.tau_anticipation, "tau_anticipation");
    check_tau(c.dt, c.tau_pf, "tau_pf");
    check_tau(c.dt, c.tau_it, "tau_it");
    check_tau(c.dt, c.tau_decision, "tau_decision");
    check_finite(c.g_input_v4, "g_input_v4");
    check_finite(c.g_pf_v4, "g_pf_v4");
    check_finite(c.g_focus_v4, "g_focus_v4");
    check_finite(c.g_v4_sal, "g_v4_sal");
    check_finite(c.g_sal_focus, "g_sal_focus");
    check_finite(c.g_focus_wm, "g_focus_wm");
    check_finite(c.g_wm_switch_inhibit, "g_wm_switch_inhibit");
    check_finite(c.g_it_readout, "g_it_readout");
    check_finite(c.g_move, "g_move");
    check_finite(c.g_switch, "g_switch");
    check_finite(c.g_anticipation, "g_anticipation");
    check_finite(c.lambda, "lambda");
    check_finite(c.bias_focus, "bias_focus");
    check_finite(c.bias_wm, "bias_wm");
    check_threshold(c.theta_move, "theta_move");
    check_threshold(c.theta_switch, "theta_switch");
    check_threshold(c.theta_bubble, "theta_bubble");
    if (c.hold_steps < 1)
        throw std::invalid_argument("model config: hold_steps must be >= 1");
    if (c.refractory_steps < 1)
        throw std::invalid_argument("model config: refractory_steps must be >= 1");
    if (c.switch_hold_steps < 0 || c.switch_hold_steps > c.refractory_steps)
        throw std::invalid_argument(
            "model config: switch_hold_steps must lie in [0, refractory_steps]");
    if (!(c.sigma_stim > 0.0))
        throw std::invalid_argument("model config: sigma_stim must be > 0");
}

std::pair<double, double> move_switch_drive(const std::array<double, kNumChannels>& it,
                                            const TargetSpec& target, double lambda) {
    const auto rel = target.relevant();
    double match = 1.0, mismatch = 0.0;
    for (int f = 0; f < kNumChannels; ++f) {
        if (rel[f])
            match = std::min(match, it[f]);
        else
            mismatch = std::max(mismatch, it[f]);
    }
    const double move = std::max(0.0, match - lambda * mismatch);
    const double sw = std::max(0.0, mismatch + (1.0 - match) - lambda * match);
    return {move, sw};
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::CovertAttend: return "covert_attend";
        case EventKind::Switch: return "switch";
        case EventKind::Saccade: return "saccade";
        case EventKind::Done: return "done";
        case EventKind::Budget: return "budget";
    }
    return "?";
}

AttentionModel::AttentionModel(const ModelConfig& config, TargetSpec target)
    : config_(config), target_(target) {
    validate(config_);
    const Grid g = config_.grid;
    const auto kernel_of = [](const std::optional<DogParams>& p) {
        return p ? build_kernel(*p) : LateralKernel{};
    };

    for (int f = 0; f < kNumChannels; ++f) {
        const std::string n = channel_name(static_cast<FeatureChannel>(f));
        input_[f] = net_.add_map("input_" + n, g, config_.tau_input);
        v4_[f] = net_.add_map("v4_" + n, g, config_.tau_v4, kernel_of(config_.v4_kernel));
    }
    saliency_ = net_.add_map("saliency", g, config_.tau_saliency,
                             kernel_of(config_.saliency_kernel));
    focus_ = net_.add_map("focus", g, config_.tau_focus, kernel_of(config_.focus_kernel));
    wm_ = net_.add_map("wm", g, config_.tau_wm, kernel_of(config_.wm_kernel));
    anticipation_ = net_.add_map("anticipation", g, config_.tau_anticipation,
                                 kernel_of(config_.anticipation_kernel));

    for (int f = 0; f < kNumChannels; ++f) {
        const std::string n = channel_name(static_cast<FeatureChannel>(f));
        pf_[f] = net_.add_unit("pf_" + n, config_.tau_pf);
        it_[f] = net_.add_unit("it_" + n, config_.tau_it);
    }
    move_ = net_.add_unit("move", config_.tau_decision);
    switch_ = net_.add_unit("switch", config_.tau_decision);

    for (int f = 0; f < kNumChannels; ++f) {
        net_.connect({AfferentProjection{input_[f], config_.g_input_v4, {}}, v4_[f]});
        net_.connect({GatedProjection{input_[f], pf_[f], config_.g_pf_v4}, v4_[f]});
        net_.connect({GatedProjection{input_[f], focus_, config_.g_focus_v4}, v4_[f]});
        net_.connect({AfferentProjection{v4_[f], config_.g_v4_sal, {}}, saliency_});
        net_.connect({AfferentProjection{v4_[f], config_.g_it_readout, {}}, it_[f]});
    }
    net_.connect({AfferentProjection{saliency_, config_.g_sal_focus, {}}, focus_});
    net_.connect({AfferentProjection{focus_, config_.g_focus_wm, {}}, wm_});
    net_.connect({GatedProjection{wm_, switch_, -config_.g_wm_switch_inhibit}, focus_});
    net_.connect({RemapProjection{wm_, focus_, 1.0}, anticipation_});
    net_.set_bias(focus_, config_.bias_focus);
    net_.set_bias(wm_, config_.bias_wm);

    // pf units encode the task: clamped to 1 on relevant channels for the trial
    const auto rel = target_.relevant();
    for (int f = 0; f < kNumChannels; ++f) {
        ScalarUnit& u = net_.unit(pf_[f]);
        u.activity = rel[f] ? 1.0 : 0.0;
        u.external = u.activity;
    }
}

void AttentionModel::present(const World& world, const Gaze& gaze) {
    ChannelImages ch = render_channels(world, gaze, config_.sigma_stim, config_.grid);
    for (int f = 0; f < kNumChannels; ++f) {
        net_.map(input_[f]).u = ch[f];
        net_.set_external_input(input_[f], std::move(ch[f]));
    }
}

std::array<double, kNumChannels> AttentionModel::it_activities() const {
    std::array<double, kNumChannels> a{};
    for (int f = 0; f < kNumChannels; ++f) a[f] = net_.unit(it_[f]).activity;
    return a;
}

std::optional<Peak> AttentionModel::focus_peak() const {
    return decode_peak(net_.map(focus_), config_.theta_bubble);
}

void AttentionModel::step_once() {
    const auto [mv, sw] = move_switch_drive(it_activities(), target_, config_.lambda);
    net_.set_external_drive(move_, config_.g_move * mv);
    net_.set_external_drive(switch_, config_.g_switch * sw);
    net_.step(StepParams{config_.dt});
    ++step_;
    trace_.push_back(
        {step_, net_.unit(move_).activity, net_.unit(switch_).activity});
    if (observer_) observer_(*this, step_);
}

Decision AttentionModel::attend_until_decision(int budget_steps) {
    // A hold run can only start on a step where a focus bubble exists; its
    // location is latched then. The run completes on unit activity alone, so
    // a bubble suppressed mid-window (the switch order already acting) still
    // yields the decision that suppressed it.
    int move_hold = 0, switch_hold = 0;
    std::optional<Peak> move_loc, switch_loc;
    bool had_peak = false;
    for (int k = 0; k < budget_steps; ++k) {
        step_once();
        const auto peak = focus_peak();
        if (peak && !had_peak) {
            // attention landed on a new location: re-arm the decision units
            // so the evidence integrated here is about this location only
            // (while the bubble lives, its own competition keeps the rest of
            // the field suppressed)
            net_.unit(move_).activity = 0.0;
            net_.unit(switch_).activity = 0.0;
            move_hold = switch_hold = 0;
            move_loc.reset();
            switch_loc.reset();
        }
        had_peak = peak.has_value();

        if (net_.unit(switch_).activity > config_.theta_switch) {
            if (switch_hold > 0)
                ++switch_hold;
            else if (peak) {
                switch_hold = 1;
                switch_loc = peak;
            }
        } else {
            switch_hold = 0;
            switch_loc.reset();
        }
        if (net_.unit(move_).activity > config_.theta_move) {
            if (move_hold > 0)
                ++move_hold;
            else if (peak) {
                move_hold = 1;
                move_loc = peak;
            }
        } else {
            move_hold = 0;
            move_loc.reset();
        }
        // ties resolve in favor of Switch
        if (switch_hold >= config_.hold_steps) return {Decision::Kind::Switch, switch_loc};
        if (move_hold >= config_.hold_steps) return {Decision::Kind::Move, move_loc};
    }
    return {Decision::Kind::Budget, std::nullopt};
}

void AttentionModel::perform_switch() {
    // memorize, then inhibit. First the switch order is held down until the
    // rejected location's wm trace can support a clean suppression (the live
    // bubble's own competition keeps the rest of the field quiet meanwhile),
    // then the order is forced and the gated wm pathway clears the field.
    const int memorize_cap = static_cast<int>(5.0 * config_.tau_wm / config_.dt);
    for (int i = 0; i < memorize_cap; ++i) {
        const auto peak = focus_peak();
        if (!peak) break;
        const int px = std::clamp(static_cast<int>(std::lround(peak->x)), 0,
                                  config_.grid.width - 1);
        const int py = std::clamp(static_cast<int>(std::lround(peak->y)), 0,
                                  config_.grid.height - 1);
        if (net_.map(wm_).u.at(px, py) >= 0.8) break;
        net_.unit(switch_).activity = 0.0;
        step_once();
    }
    for (int i = 0; i < config_.switch_hold_steps; ++i) {
        net_.unit(switch_).activity = 1.0;
        step_once();
    }
}

Gaze AttentionModel::perform_saccade(const World& world, Gaze gaze) {
    const auto peak = focus_peak();
    if (!peak)
        throw std::runtime_error("perform_saccade: focus has no bubble above threshold");

    const Grid g = config_.grid;
    const Vec2 center = fovea(g);
    const Vec2 v = Vec2{peak->x, peak->y} - center;

    // prediction from the pre-saccadic state
    const ActivityGrid anticipation =
        remap_correlate(net_.map(wm_), net_.map(focus_),
                        g.width / 2, g.height / 2);

    const Gaze next = apply_saccade(gaze, v);
    present(world, next);
    net_.map(focus_).u.fill(0.0);
    net_.map(saliency_).u.fill(0.0);
    net_.map(wm_).u.fill(0.0);

    // memory re-forms only where the prediction and fresh salience agree
    for (int i = 0; i < config_.refractory_steps; ++i) {
        const ActivityGrid& sal = net_.map(saliency_).u;
        const double smax = sal.max();
        ActivityGrid drive(g);
        if (smax > 0.0) {
            for (int j = 0; j < drive.size(); ++j)
                drive[j] = config_.g_anticipation * anticipation[j] * (sal[j] / smax);
        }
        net_.set_external_input(wm_, std::move(drive));
        step_once();
    }
    net_.clear_external_input(wm_);
    return next;
}

TrialLog AttentionModel::run_trial(const World& world, Gaze gaze,
                                   const TrialLimits& limits) {
    int matching = 0;
    const Stimulus* target_stim = nullptr;
    for (const auto& s : world.stimuli) {
        if (target_.matches(s)) {
            ++matching;
            target_stim = &s;
        }
    }
    if (matching > 1)
        throw std::invalid_argument(
            "run_trial: world must contain at most one target stimulus");

    present(world, gaze);
    TrialLog log;
    const Vec2 center = fovea(config_.grid);

    for (int attend = 0; attend < limits.max_attends; ++attend) {
        const int budget = std::min(limits.attend_budget, limits.max_steps - step_);
        if (budget <= 0) break;
        const Decision d = attend_until_decision(budget);
        if (d.kind == Decision::Kind::Budget) break;

        const Vec2 retinal{d.location->x, d.location->y};
        const Vec2 world_loc = retinal - center + gaze.center;
        const double mv = net_.unit(move_).activity;
        const double sw = net_.unit(switch_).activity;
        log.events.push_back({step_ - config_.hold_steps + 1, EventKind::CovertAttend,
                              retinal, world_loc, mv, sw});

        if (d.kind == Decision::Kind::Switch) {
            log.events.push_back({step_, EventKind::Switch, retinal, world_loc, mv, sw});
            perform_switch();
            continue;
        }

        // Move: overt shift toward the attended stimulus
        const int decision_step = step_;
        gaze = perform_saccade(world, gaze);
        log.events.push_back(
            {decision_step, EventKind::Saccade, retinal, gaze.center, mv, sw});
        const bool on_target = [&] {
            if (!target_stim) return false;
            const Vec2 err = gaze.center - target_stim->world_pos;
            return std::hypot(err.x, err.y) <= limits.done_tolerance;
        }();
        log.events.push_back({step_, on_target ? EventKind::Done : EventKind::Budget,
                              fovea(config_.grid), gaze.center,
                              net_.unit(move_).activity,
                              net_.unit(switch_).activity});
        return log;
    }

    log.events.push_back({step_, EventKind::Budget, std::nullopt, std::nullopt,
                          net_.unit(move_).activity, net_.unit(switch_).activity});
    return log;
}

} // namespace attsim
