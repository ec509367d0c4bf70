#include "mmnoma/rate_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace mmnoma {

RateReport RateReport::from_rates(std::vector<UserRate> rates) {
    RateReport r;
    r.per_user = std::move(rates);
    r.sum_rate = 0.0;
    r.min_rate = r.per_user.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    for (const auto& u : r.per_user) {
        r.sum_rate += u.rate;
        r.min_rate = std::min(r.min_rate, u.rate);
    }
    return r;
}

double RateReport::rate_of(int user_id) const {
    for (const auto& u : per_user) {
        if (u.user_id == user_id) {
            return u.rate;
        }
    }
    throw std::out_of_range("no rate for user " + std::to_string(user_id));
}

RateReport noma_rates(const NomaGroup& group) {
    double used = 0.0;
    std::set<int> ids;
    for (const auto& m : group.members) {
        if (!(m.power >= 0.0) || !(m.effective_gain >= 0.0)) {
            throw std::invalid_argument("NOMA member " + std::to_string(m.user_id) +
                                        " has a negative power or gain");
        }
        if (!ids.insert(m.user_id).second) {
            throw std::invalid_argument("user " + std::to_string(m.user_id) + " appears twice in a NOMA group");
        }
        used += m.power;
    }
    if (used > group.total_power * (1.0 + 1e-9) + 1e-300) {
        throw std::invalid_argument("NOMA powers exceed the group power budget");
    }

    const std::size_t k = group.members.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = group.members[a];
        const auto& y = group.members[b];
        return x.effective_gain != y.effective_gain ? x.effective_gain < y.effective_gain : x.user_id < y.user_id;
    });

    std::vector<UserRate> rates(k);
    double stronger = 0.0;  // power of users decoded later
    for (std::size_t pos = k; pos-- > 0;) {
        const auto& m = group.members[order[pos]];
        const double g = m.effective_gain;
        rates[order[pos]] = {m.user_id, std::log2(1.0 + m.power * g / (g * stronger + 1.0))};
        stronger += m.power;
    }
    return RateReport::from_rates(std::move(rates));
}

RateReport tdma_rates(std::span<const TdmaUser> users, double total_power) {
    double tau_sum = 0.0;
    for (const auto& u : users) {
        if (!(u.time_fraction >= 0.0)) {
            throw std::invalid_argument("TDMA time fractions must be nonnegative");
        }
        if (!(u.full_gain >= 0.0)) {
            throw std::invalid_argument("TDMA gains must be nonnegative");
        }
        tau_sum += u.time_fraction;
    }
    if (tau_sum > 1.0 + 1e-9) {
        throw std::invalid_argument("TDMA time fractions sum to " + std::to_string(tau_sum) + " > 1");
    }
    if (!(total_power >= 0.0)) {
        throw std::invalid_argument("TDMA power must be nonnegative");
    }
    std::vector<UserRate> rates;
    rates.reserve(users.size());
    for (const auto& u : users) {
        rates.push_back({u.user_id, u.time_fraction * std::log2(1.0 + total_power * u.full_gain)});
    }
    return RateReport::from_rates(std::move(rates));
}

namespace {

const ChannelState& channel_of(std::span<const ChannelState> channels, int user_id) {
    for (const auto& c : channels) {
        if (c.user_id == user_id) {
            return c;
        }
    }
    throw std::invalid_argument("no channel for user " + std::to_string(user_id));
}

void check_partition(std::span<const MuiGroup> groups) {
    std::set<int> seen;
    for (const auto& g : groups) {
        for (const auto& m : g.members) {
            if (!seen.insert(m.user_id).second) {
                throw std::invalid_argument("user " + std::to_string(m.user_id) + " belongs to more than one group");
            }
        }
        if (!(g.chain_power >= 0.0)) {
            throw std::invalid_argument("chain power must be nonnegative");
        }
    }
}

}  // namespace

std::vector<double> mui_powers(std::span<const MuiGroup> groups, std::span<const ChannelState> channels,
                               bool ignore_mui) {
    check_partition(groups);
    std::vector<double> out;
    for (std::size_t m = 0; m < groups.size(); ++m) {
        for (const auto& member : groups[m].members) {
            const ChannelState& ch = channel_of(channels, member.user_id);
            double interference = 0.0;
            if (!ignore_mui) {
                for (std::size_t other = 0; other < groups.size(); ++other) {
                    if (other != m) {
                        interference += groups[other].chain_power * ch.power() * beam_gain(groups[other].awv, ch.direction);
                    }
                }
            }
            out.push_back(interference);
        }
    }
    return out;
}

RateReport mui_rates(std::span<const MuiGroup> groups, std::span<const ChannelState> channels, double noise_power,
                     bool ignore_mui) {
    if (!(noise_power > 0.0)) {
        throw std::invalid_argument("noise power must be positive");
    }
    const auto interference = mui_powers(groups, channels, ignore_mui);
    std::vector<UserRate> all;
    std::size_t at = 0;
    for (const auto& g : groups) {
        NomaGroup noma;
        noma.total_power = g.chain_power;
        for (const auto& member : g.members) {
            const ChannelState& ch = channel_of(channels, member.user_id);
            const double gain = ch.power() * beam_gain(g.awv, ch.direction) / (noise_power + interference[at++]);
            noma.members.push_back({member.user_id, gain, member.power});
        }
        const auto report = noma_rates(noma);
        all.insert(all.end(), report.per_user.begin(), report.per_user.end());
    }
    return RateReport::from_rates(std::move(all));
}

}  // namespace mmnoma
