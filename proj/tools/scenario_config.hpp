#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmnoma/hybrid.hpp"
#include "mmnoma/pairing.hpp"

namespace mmnoma::cli {

// Bad config text or values. The message carries line:col for syntax errors
// and the JSON path of the offending field for validation errors.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct UserConfig {
    double avg_power_db = 0.0;
    double direction_cos = 0.0;

    bool operator==(const UserConfig&) const = default;
};

// Either an explicit value list or start/stop/points (inclusive linspace).
struct SweepSpec {
    std::string variable;
    std::optional<double> start;
    std::optional<double> stop;
    std::optional<int> points;
    std::vector<double> values;

    std::vector<double> grid() const;
    bool operator==(const SweepSpec&) const = default;
};

struct TargetConfig {
    double direction_cos = 0.0;
    double gain = 0.0;

    bool operator==(const TargetConfig&) const = default;
};

// Beam gain used for the TDMA baseline: the full narrow-beam gain N, or the
// mean of the NOMA beam gains so both schemes spend the same gain.
enum class TdmaGain { full, matched };

enum class DesignerKind { cm_optimize, subarray };

struct ScenarioConfig {
    int n_antennas = 32;
    double noise_power = 1.0;
    double snr_db = 20.0;  // total transmit power over noise, excluding beam gain
    std::vector<UserConfig> users;
    std::vector<double> power_split{0.25, 0.75};  // {strong, weak}
    BeamMode beam_mode = BeamMode::multi_beam;
    GainModel gain_model = GainModel::ideal;
    std::optional<SweepSpec> sweep;
    std::vector<double> widths_over_2n{1.0, 2.0, 4.0, 8.0};
    double beta = 3.0;
    std::optional<TdmaGain> tdma_beam_gain;
    std::vector<std::vector<int>> groups;  // user ids (1-based, config order)
    Precoder precoder = Precoder::identity;
    DesignerKind designer = DesignerKind::cm_optimize;
    std::vector<TargetConfig> targets;
    std::uint64_t seed = 0;

    double total_power() const;  // noise_power * 10^(snr_db / 10)
    bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& config);

}  // namespace mmnoma::cli
