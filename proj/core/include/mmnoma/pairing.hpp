#pragma once

#include <array>
#include <vector>

#include "mmnoma/array_core.hpp"

namespace mmnoma {

enum class BeamMode { single_beam, multi_beam };
enum class GainModel { ideal, physical };
enum class PowerPolicy { fixed_split, max_sum_rate };

struct PairingInstance {
    std::vector<ChannelState> users;
    ArrayGeometry geom{32};
    BeamMode mode = BeamMode::multi_beam;
    GainModel model = GainModel::ideal;
    double group_power = 1.0;  // transmit power of each group
    double noise_power = 1.0;
    PowerPolicy policy = PowerPolicy::fixed_split;
    std::array<double, 2> split{0.25, 0.75};  // {strong, weak}

    void validate() const;
};

// Beams serving one group. Single-beam and merged groups have one width;
// unmerged multi-beam groups have one width per member. gains[i] is the gain
// seen by the i-th member of the group.
struct GroupBeam {
    bool merged = false;
    std::vector<double> widths;
    std::vector<double> gains;
};

struct PairingGroup {
    std::vector<int> user_ids;  // ascending
    GroupBeam beam;
    double sum_rate = 0.0;
};

struct PairingPlan {
    std::vector<PairingGroup> groups;  // ordered by first user id
    double objective = 0.0;            // time-shared sum rate
};

// Groups share the resource in equal time fractions, so the objective is the
// mean of the group sum rates.
PairingPlan evaluate_plan(const PairingInstance& instance,
                          const std::vector<std::vector<int>>& groups,
                          const std::vector<bool>& merged);

// Every perfect matching (plus one singleton for odd K), K <= 10.
PairingPlan exhaustive_pairing(const PairingInstance& instance);

// Rank users by |g|^2 descending and pair rank i with rank K+1-i.
PairingPlan strong_weak_heuristic(const PairingInstance& instance);

// Serves any pair closer than 2/N with one narrow beam (width 2/N, gain N).
PairingPlan angle_merge(const PairingInstance& instance, const PairingPlan& plan);

}  // namespace mmnoma
