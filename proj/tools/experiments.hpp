#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmnoma/beam_design.hpp"
#include "mmnoma/hybrid.hpp"
#include "mmnoma/pairing.hpp"
#include "scenario_config.hpp"

namespace mmnoma::cli {

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct SnrRow {
    double snr_db = 0.0;
    double b_over_2n = 0.0;  // beam width in units of 2/N
    double noma_sum_rate = 0.0;
    double tdma_sum_rate = 0.0;
};

struct BetaRow {
    double beta = 0.0;
    double noma_sum_rate = 0.0;
    double tdma_sum_rate = 0.0;
};

struct GainRow {
    double g2 = 0.0;
    double noma_sum_rate = 0.0;
};

// Two users sharing one wide beam of width B (ideal gain 2/B) against TDMA
// with a dedicated beam each and equal time shares.
std::vector<SnrRow> sweep_snr(const ScenarioConfig& config);

// Two users with beam gains N/2 each; the users' total linear channel power is
// held fixed while their ratio beta varies.
std::vector<BetaRow> sweep_beta(const ScenarioConfig& config);

// Fixed beta, gains G_1 = N - G_2 swept over G_2.
std::vector<GainRow> sweep_gain(const ScenarioConfig& config);

// Users get ids 1..K in config order; deterministic fading with phases drawn
// from the config seed.
std::vector<ChannelState> user_channels(const ScenarioConfig& config);

PairingInstance pairing_instance(const ScenarioConfig& config);

struct PairingDemo {
    PairingPlan exhaustive;
    PairingPlan heuristic;
    PairingPlan exhaustive_merged;
    PairingPlan heuristic_merged;
};
PairingDemo pairing_demo(const ScenarioConfig& config);

// One RF chain per group (config groups, else the strong-weak pairing), each
// with its own analog beam and power P/M split inside the group.
HybridConfig hybrid_setup(const ScenarioConfig& config, const std::vector<ChannelState>& channels);

struct HybridDemo {
    HybridReport mode1;
    HybridReport mode1_ignore_mui;
    HybridReport mode2;
};
HybridDemo hybrid_demo(const ScenarioConfig& config);

struct DesignDemo {
    std::vector<BeamTarget> targets;
    DesignResult result;
};
DesignDemo design_beam(const ScenarioConfig& config);

struct RunOptions {
    bool ignore_mui = false;
    int grid = 1024;
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"sweep-snr",    "sweep-beta",  "sweep-gain",
                                                "pairing-demo", "hybrid-demo", "design-beam"};
    return names;
}

// Runs one named experiment and writes its CSV files under out_dir.
// Returns the paths written.
std::vector<std::filesystem::path> run_named(const std::string& command, const ScenarioConfig& config,
                                             const std::filesystem::path& out_dir, const RunOptions& options);

}  // namespace mmnoma::cli
