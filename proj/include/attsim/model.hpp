#ifndef ATTSIM_MODEL_HPP
#define ATTSIM_MODEL_HPP

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "attsim/network.hpp"
#include "attsim/scenario.hpp"

namespace attsim {

// The task: one color plus one orientation define the sought target.
struct TargetSpec {
    Color color = Color::Blue;
    Orientation orientation = Orientation::Deg45;

    std::array<bool, kNumChannels> relevant() const {
        std::array<bool, kNumChannels> r{false, false, false, false};
        r[static_cast<int>(channel_of(color))] = true;
        r[static_cast<int>(channel_of(orientation))] = true;
        return r;
    }
    bool matches(const Stimulus& s) const {
        return s.color == color && s.orientation == orientation;
    }
};

struct DogParams {
    double a_exc = 1.0;
    double sigma_exc = 2.0;
    double a_inh = 0.5;
    double sigma_inh = 10.0;
    int radius = 0; // 0 -> ceil(3 * sigma_inh)
};
LateralKernel build_kernel(const DogParams& p);

struct ModelConfig {
    Grid grid{40, 40};
    double dt = 0.1;

    // time constants (simulation time units)
    double tau_input = 1.0;
    double tau_v4 = 1.0;
    double tau_saliency = 1.0;
    double tau_focus = 1.0;
    // wm is deliberately slow: a location must stay attended through a whole
    // decision before its memory trace ignites
    double tau_wm = 2.0;
    double tau_anticipation = 1.0;
    double tau_pf = 1.0;
    double tau_it = 0.5;
    double tau_decision = 0.5;

    // lateral kernels; absent means no lateral interaction on that map.
    // focus: quasi-global inhibition so one bubble wins anywhere on the grid.
    // wm: local inhibition so several remembered bubbles coexist.
    std::optional<DogParams> v4_kernel;
    std::optional<DogParams> saliency_kernel;
    std::optional<DogParams> focus_kernel = DogParams{1.5, 2.0, 0.7, 20.0, 0};
    std::optional<DogParams> wm_kernel = DogParams{1.5, 2.0, 0.5, 4.0, 0};
    std::optional<DogParams> anticipation_kernel;

    // resting drives; negative values set the ignition threshold of the
    // self-exciting fields (a seed must outgrow -h before the kernel can
    // amplify it)
    double bias_focus = -0.15;
    double bias_wm = -0.5;

    // projection gains
    double g_input_v4 = 0.5;
    double g_pf_v4 = 0.15;          // feature bias: input gated by pf
    double g_focus_v4 = 0.35;       // spatial bias: input gated by focus
    double g_v4_sal = 0.4;
    double g_sal_focus = 1.0;
    double g_focus_wm = 0.6;
    double g_wm_switch_inhibit = 10.0; // wm gated by switch, applied negatively
    double g_it_readout = 1.0;      // it integrates the spatial max of its v4 map
    double g_move = 1.0;
    double g_switch = 1.0;
    double g_anticipation = 1.0;    // post-saccadic wm drive gain
    double lambda = 0.5;            // cross-inhibition in the move/switch drive

    // decision machinery
    double theta_move = 0.5;
    double theta_switch = 0.5;
    double theta_bubble = 0.5;
    int hold_steps = 12;
    int refractory_steps = 30;
    int switch_hold_steps = 10;     // switch unit forced high at event onset

    double sigma_stim = 1.5;
};

// Throws std::invalid_argument naming the offending field.
void validate(const ModelConfig& config);

// match    = min over relevant channels of it[f]
// mismatch = max over non-relevant channels of it[f]
// move     = max(0, match - lambda * mismatch)
// switch   = max(0, mismatch + (1 - match) - lambda * match)
std::pair<double, double> move_switch_drive(const std::array<double, kNumChannels>& it,
                                            const TargetSpec& target, double lambda);

enum class EventKind { CovertAttend, Switch, Saccade, Done, Budget };
const char* to_string(EventKind k);

struct ScanEvent {
    int step = 0;
    EventKind kind = EventKind::Budget;
    std::optional<Vec2> retinal; // cell coordinates
    std::optional<Vec2> world;   // world coordinates
    double move_activity = 0.0;
    double switch_activity = 0.0;
};

struct TrialLog {
    std::vector<ScanEvent> events;
    bool done() const {
        return !events.empty() && events.back().kind == EventKind::Done;
    }
};

struct Decision {
    enum class Kind { Move, Switch, Budget };
    Kind kind = Kind::Budget;
    std::optional<Peak> location; // focus peak at decision time
};

struct TrialLimits {
    int max_attends = 8;
    int max_steps = 20000;
    int attend_budget = 600;      // step budget per attend episode
    double done_tolerance = 1.0;  // world cells between gaze and target for Done
};

struct TraceSample {
    int step = 0;
    double move_activity = 0.0;
    double switch_activity = 0.0;
};

// The wired multi-map architecture: four input channels feed four v4 maps,
// biased by the pf feature units and the focus map; v4 drives the saliency
// map, the focus winner-take-all field, and the it readout units; focus
// feeds a self-sustaining working memory whose switch-gated return inhibits
// previously attended locations; an anticipation map carries the remap of
// wm by the focus bubble.
class AttentionModel {
public:
    AttentionModel(const ModelConfig& config, TargetSpec target);

    const ModelConfig& config() const { return config_; }
    const TargetSpec& target() const { return target_; }
    Network& network() { return net_; }
    const Network& network() const { return net_; }

    // Renders the world at the given gaze and clamps the input maps to it.
    void present(const World& world, const Gaze& gaze);

    // Steps until move or switch stays above threshold for hold_steps
    // consecutive steps while a focus bubble exists, or the budget runs out.
    Decision attend_until_decision(int budget_steps);

    // Executes the switch order: the switch unit is forced high so the
    // wm-gated inhibition suppresses every memorized location, then the
    // network settles for the rest of the refractory window.
    void perform_switch();

    // Decodes the saccade vector from the focus bubble, remaps wm through
    // the pre-saccadic anticipation, shifts the gaze, re-renders, and
    // rebuilds wm where anticipation and fresh saliency agree.
    // Throws std::runtime_error when focus has no bubble above theta_bubble.
    Gaze perform_saccade(const World& world, Gaze gaze);

    TrialLog run_trial(const World& world, Gaze gaze, const TrialLimits& limits);

    // handles
    MapId input_map(FeatureChannel f) const { return input_[static_cast<int>(f)]; }
    MapId v4_map(FeatureChannel f) const { return v4_[static_cast<int>(f)]; }
    MapId saliency_map() const { return saliency_; }
    MapId focus_map() const { return focus_; }
    MapId wm_map() const { return wm_; }
    MapId anticipation_map() const { return anticipation_; }
    UnitId pf_unit(FeatureChannel f) const { return pf_[static_cast<int>(f)]; }
    UnitId it_unit(FeatureChannel f) const { return it_[static_cast<int>(f)]; }
    UnitId move_unit() const { return move_; }
    UnitId switch_unit() const { return switch_; }

    int step_count() const { return step_; }
    const std::vector<TraceSample>& trace() const { return trace_; }
    void set_step_observer(std::function<void(const AttentionModel&, int)> fn) {
        observer_ = std::move(fn);
    }

    std::array<double, kNumChannels> it_activities() const;
    std::optional<Peak> focus_peak() const;

    // One synchronous step: decision drives from the current it readouts,
    // then the whole network advances.
    void step_once();

private:
    ModelConfig config_;
    TargetSpec target_;
    Network net_;
    std::array<MapId, kNumChannels> input_{};
    std::array<MapId, kNumChannels> v4_{};
    MapId saliency_, focus_, wm_, anticipation_;
    std::array<UnitId, kNumChannels> pf_{};
    std::array<UnitId, kNumChannels> it_{};
    UnitId move_, switch_;
    int step_ = 0;
    std::vector<TraceSample> trace_;
    std::function<void(const AttentionModel&, int)> observer_;
};

} // namespace attsim

#endif
