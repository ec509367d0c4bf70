#pragma once

#include <span>
#include <vector>

#include "mmnoma/array_core.hpp"

namespace mmnoma {

// One user inside a NOMA group. effective_gain is |g|^2 * G / sigma^2, i.e.
// noise-normalized, so powers are in units of the noise power.
struct NomaMember {
    int user_id = 0;
    double effective_gain = 0.0;
    double power = 0.0;
};

struct NomaGroup {
    std::vector<NomaMember> members;
    double total_power = 0.0;
};

struct UserRate {
    int user_id = 0;
    double rate = 0.0;  // bits/s/Hz
};

struct RateReport {
    std::vector<UserRate> per_user;
    double sum_rate = 0.0;
    double min_rate = 0.0;

    static RateReport from_rates(std::vector<UserRate> rates);
    double rate_of(int user_id) const;
};

// Downlink SIC rates. Members are decoded in ascending effective gain (ties by
// ascending user id); the user at sorted position k gets
//   log2(1 + p_k G_k / (G_k * sum_{j>k} p_j + 1)).
// Output follows the input member order.
RateReport noma_rates(const NomaGroup& group);

struct TdmaUser {
    int user_id = 0;
    double full_gain = 0.0;      // effective gain with a dedicated beam
    double time_fraction = 0.0;  // tau_i
};

// R_i = tau_i * log2(1 + P * full_gain_i). Requires tau_i >= 0 and sum tau_i <= 1.
RateReport tdma_rates(std::span<const TdmaUser> users, double total_power);

struct ChainMember {
    int user_id = 0;
    double power = 0.0;  // absolute transmit power for this user
};

// A NOMA group served by one analog beam, carried by its own RF chain.
struct MuiGroup {
    std::vector<ChainMember> members;
    Awv awv;
    double chain_power = 0.0;
};

// Per-user interference from the other groups' beams:
//   I_u = sum_{m' != m} chain_power_{m'} * |g_u|^2 * beam_gain(w_{m'}, phi_u).
// Returned in the order users appear across groups. Zero when ignore_mui is set.
std::vector<double> mui_powers(std::span<const MuiGroup> groups,
                               std::span<const ChannelState> channels, bool ignore_mui);

// NOMA rates per group with sigma^2 + I_u as each user's effective noise.
RateReport mui_rates(std::span<const MuiGroup> groups, std::span<const ChannelState> channels,
                     double noise_power, bool ignore_mui);

}  // namespace mmnoma
