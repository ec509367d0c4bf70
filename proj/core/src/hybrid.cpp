#include "mmnoma/hybrid.hpp"

#include <set>
#include <stdexcept>
#include <string>

#include "mmnoma/error.hpp"

namespace mmnoma {

namespace {

const ChannelState& channel_of(std::span<const ChannelState> channels, int user_id) {
    for (const auto& c : channels) {
        if (c.user_id == user_id) {
            return c;
        }
    }
    throw std::invalid_argument("no channel for user " + std::to_string(user_id));
}

// Flattened (chain, member) order shared by every per-user table.
struct Slot {
    std::size_t chain;
    const ChainMember* member;
};

std::vector<Slot> slots_of(const HybridConfig& config) {
    std::vector<Slot> out;
    for (std::size_t m = 0; m < config.chains.size(); ++m) {
        for (const auto& member : config.chains[m].members) {
            out.push_back({m, &member});
        }
    }
    return out;
}

// Per-user SIC rates inside each chain's group, given the useful stream gain
// and the interference-plus-noise of every slot.
HybridReport assemble(const HybridConfig& config, const std::vector<double>& useful, const std::vector<double>& interference,
                      double noise_power) {
    HybridReport report;
    report.mode = config.mode;
    std::vector<UserRate> all;
    std::size_t at = 0;
    for (const auto& chain : config.chains) {
        NomaGroup group;
        group.total_power = chain.chain_power;
        const std::size_t begin = at;
        for (const auto& member : chain.members) {
            group.members.push_back({member.user_id, useful[at] / (noise_power + interference[at]), member.power});
            ++at;
        }
        const auto rates = noma_rates(group);
        for (std::size_t i = 0; i < rates.per_user.size(); ++i) {
            all.push_back(rates.per_user[i]);
            report.rows.push_back({chain.chain_id, rates.per_user[i].user_id, rates.per_user[i].rate,
                                   interference[begin + i]});
        }
    }
    report.rates = RateReport::from_rates(std::move(all));
    return report;
}

}  // namespace

void HybridConfig::validate(std::span<const ChannelState> channels) const {
    if (mode != 1 && mode != 2) {
        throw std::invalid_argument("hybrid mode must be 1 or 2");
    }
    if (chains.empty()) {
        throw std::invalid_argument("hybrid configuration needs at least one RF chain");
    }
    if (max_users_per_chain < 1) {
        throw std::invalid_argument("max_users_per_chain must be positive");
    }
    std::set<int> users;
    std::set<int> chain_ids;
    std::size_t total = 0;
    const auto n = chains.front().awv.size();
    for (const auto& chain : chains) {
        if (!chain_ids.insert(chain.chain_id).second) {
            throw std::invalid_argument("duplicate RF chain id " + std::to_string(chain.chain_id));
        }
        if (chain.awv.size() != n) {
            throw std::invalid_argument("all RF chains must drive the same array");
        }
        if (!(chain.chain_power >= 0.0)) {
            throw std::invalid_argument("chain power must be nonnegative");
        }
        if (chain.members.empty()) {
            throw std::invalid_argument("RF chain " + std::to_string(chain.chain_id) + " serves no user");
        }
        if (static_cast<int>(chain.members.size()) > max_users_per_chain) {
            throw std::invalid_argument("RF chain " + std::to_string(chain.chain_id) + " serves more than " +
                                        std::to_string(max_users_per_chain) + " users");
        }
        double used = 0.0;
        for (const auto& m : chain.members) {
            if (!users.insert(m.user_id).second) {
                throw std::invalid_argument("user " + std::to_string(m.user_id) + " is served by two RF chains");
            }
            if (!(m.power >= 0.0)) {
                throw std::invalid_argument("user powers must be nonnegative");
            }
            channel_of(channels, m.user_id);
            used += m.power;
        }
        if (used > chain.chain_power * (1.0 + 1e-9) + 1e-300) {
            throw std::invalid_argument("RF chain " + std::to_string(chain.chain_id) +
                                        " allocates more than its chain power");
        }
        total += chain.members.size();
    }
    if (total > chains.size() * static_cast<std::size_t>(max_users_per_chain)) {
        throw std::invalid_argument("more users than M * K");
    }
}

Eigen::MatrixXcd effective_channel(const HybridConfig& config, std::span<const ChannelState> channels) {
    const auto slots = slots_of(config);
    const auto chains = static_cast<Eigen::Index>(config.chains.size());
    const ArrayGeometry geom(config.chains.front().awv.size());
    Eigen::MatrixXcd h(static_cast<Eigen::Index>(slots.size()), chains);
    for (std::size_t u = 0; u < slots.size(); ++u) {
        const ChannelState& ch = channel_of(channels, slots[u].member->user_id);
        const cvec a = steering_vector(geom, ch.direction);
        for (Eigen::Index m = 0; m < chains; ++m) {
            // dot() conjugates its left operand: w^H a
            h(static_cast<Eigen::Index>(u), m) = ch.gain * config.chains[static_cast<std::size_t>(m)].awv.weights().dot(a);
        }
    }
    return h;
}

Eigen::MatrixXcd digital_precoder(const HybridConfig& config, std::span<const ChannelState> channels) {
    const auto m = static_cast<Eigen::Index>(config.chains.size());
    if (config.precoder == Precoder::identity) {
        return Eigen::MatrixXcd::Identity(m, m);
    }
    const Eigen::MatrixXcd h = effective_channel(config, channels);
    const auto slots = slots_of(config);

    // Representative row per chain: the member SIC decodes last.
    Eigen::MatrixXcd rep(m, m);
    std::vector<int> rep_row(static_cast<std::size_t>(m), -1);
    for (std::size_t u = 0; u < slots.size(); ++u) {
        const auto chain = static_cast<Eigen::Index>(slots[u].chain);
        const int current = rep_row[slots[u].chain];
        const double g = std::norm(h(static_cast<Eigen::Index>(u), chain));
        if (current < 0) {
            rep_row[slots[u].chain] = static_cast<int>(u);
            continue;
        }
        const double best = std::norm(h(current, chain));
        if (g > best || (g == best && slots[u].member->user_id > slots[static_cast<std::size_t>(current)].member->user_id)) {
            rep_row[slots[u].chain] = static_cast<int>(u);
        }
    }
    for (Eigen::Index c = 0; c < m; ++c) {
        rep.row(c) = h.row(rep_row[static_cast<std::size_t>(c)]);
    }

    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rep, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    constexpr double kRankTol = 1e-10;
    if (!(sv.size() > 0 && sv[sv.size() - 1] > kRankTol * sv[0])) {
        throw DegenerateError("zero-forcing needs linearly independent representative channels");
    }
    const Eigen::MatrixXcd inv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    Eigen::MatrixXcd f = inv;
    for (Eigen::Index c = 0; c < m; ++c) {
        f.col(c) /= inv.col(c).norm();
    }
    return f;
}

double radiated_power(const HybridConfig& config, const Eigen::MatrixXcd& digital) {
    double total = 0.0;
    for (Eigen::Index s = 0; s < digital.cols(); ++s) {
        double stream = 0.0;
        for (Eigen::Index m = 0; m < digital.rows(); ++m) {
            stream += std::norm(digital(m, s)) * config.chains[static_cast<std::size_t>(m)].awv.weights().squaredNorm();
        }
        total += config.chains[static_cast<std::size_t>(s)].chain_power * stream;
    }
    return total;
}

HybridReport mode1_evaluate(const HybridConfig& config, std::span<const ChannelState> channels,
                            double noise_power, bool ignore_mui) {
    config.validate(channels);
    if (!(noise_power > 0.0)) {
        throw std::invalid_argument("noise power must be positive");
    }
    std::vector<MuiGroup> groups;
    for (const auto& chain : config.chains) {
        groups.push_back({chain.members, chain.awv, chain.chain_power});
    }
    const auto interference = mui_powers(groups, channels, ignore_mui);
    const auto slots = slots_of(config);
    std::vector<double> useful;
    for (const auto& slot : slots) {
        const ChannelState& ch = channel_of(channels, slot.member->user_id);
        useful.push_back(ch.power() * beam_gain(config.chains[slot.chain].awv, ch.direction));
    }
    HybridReport report = assemble(config, useful, interference, noise_power);
    report.mode = 1;
    report.digital = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(config.chains.size()),
                                                static_cast<Eigen::Index>(config.chains.size()));
    return report;
}

HybridReport mode2_evaluate(const HybridConfig& config, std::span<const ChannelState> channels,
                            double noise_power) {
    config.validate(channels);
    if (!(noise_power > 0.0)) {
        throw std::invalid_argument("noise power must be positive");
    }
    const Eigen::MatrixXcd f = digital_precoder(config, channels);
    const Eigen::MatrixXcd coeff = effective_channel(config, channels) * f;  // user x stream
    const auto slots = slots_of(config);
    std::vector<double> useful;
    std::vector<double> interference;
    for (std::size_t u = 0; u < slots.size(); ++u) {
        const auto row = static_cast<Eigen::Index>(u);
        useful.push_back(std::norm(coeff(row, static_cast<Eigen::Index>(slots[u].chain))));
        double other = 0.0;
        for (std::size_t s = 0; s < config.chains.size(); ++s) {
            if (s != slots[u].chain) {
                other += config.chains[s].chain_power * std::norm(coeff(row, static_cast<Eigen::Index>(s)));
            }
        }
        interference.push_back(other);
    }
    HybridReport report = assemble(config, useful, interference, noise_power);
    report.mode = 2;
    report.digital = f;
    return report;
}

}  // namespace mmnoma
