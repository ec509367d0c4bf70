#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mmnoma/array_core.hpp"
#include "mmnoma/rate_engine.hpp"

namespace mmnoma {

struct RfChainPlan {
    int chain_id = 0;
    Awv awv;
    std::vector<ChainMember> members;  // the chain's NOMA group
    double chain_power = 0.0;
};

enum class Precoder { identity, zero_forcing };

struct HybridConfig {
    int mode = 1;  // 1: independent chains, 2: chains jointly serve all users
    std::vector<RfChainPlan> chains;
    Precoder precoder = Precoder::identity;
    int max_users_per_chain = 2;  // K; at most M*K users in total

    void validate(std::span<const ChannelState> channels) const;
};

struct HybridRow {
    int chain_id = 0;
    int user_id = 0;
    double rate = 0.0;
    double mui_power = 0.0;
};

struct HybridReport {
    int mode = 1;
    RateReport rates;
    std::vector<HybridRow> rows;  // chain order, then member order
    Eigen::MatrixXcd digital;     // M x M digital precoder (mode 2)
};

// H_eff[u, m] = g_u * (w_m^H a(phi_u)), rows in chain/member order.
Eigen::MatrixXcd effective_channel(const HybridConfig& config, std::span<const ChannelState> channels);

// Digital precoder with unit-norm columns. Zero-forcing inverts the rows of
// the strongest member of each chain; throws DegenerateError if they are
// linearly dependent.
Eigen::MatrixXcd digital_precoder(const HybridConfig& config, std::span<const ChannelState> channels);

// Sum over streams of chain_power * ||F[:, s] (x) w||^2 (per-chain accounting).
double radiated_power(const HybridConfig& config, const Eigen::MatrixXcd& digital);

// Each chain runs its own NOMA group; other chains' beams appear as MUI.
HybridReport mode1_evaluate(const HybridConfig& config, std::span<const ChannelState> channels,
                            double noise_power, bool ignore_mui);

// One stream per chain mixed by the digital precoder across all chains;
// SIC inside each stream's group, other streams as interference.
HybridReport mode2_evaluate(const HybridConfig& config, std::span<const ChannelState> channels,
                            double noise_power);

}  // namespace mmnoma
