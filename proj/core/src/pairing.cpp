#include "mmnoma/pairing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include "mmnoma/allocation.hpp"
#include "mmnoma/beam_design.hpp"
#include "mmnoma/beam_model.hpp"
#include "mmnoma/rate_engine.hpp"

namespace mmnoma {

namespace {

constexpr int kMaxExhaustiveUsers = 10;

const ChannelState& user_of(const PairingInstance& inst, int user_id) {
    for (const auto& u : inst.users) {
        if (u.user_id == user_id) {
            return u;
        }
    }
    throw std::invalid_argument("unknown user " + std::to_string(user_id));
}

// Beam gains seen by the members of one group (ids ascending).
GroupBeam group_beam(const PairingInstance& inst, const std::vector<int>& ids, bool merged) {
    const double n = inst.geom.n();
    const double narrow = inst.geom.min_width();
    GroupBeam beam;
    beam.merged = merged;
    if (ids.size() == 1) {
        beam.widths = {narrow};
        beam.gains = {n};
        return beam;
    }
    const ChannelState& a = user_of(inst, ids[0]);
    const ChannelState& b = user_of(inst, ids[1]);
    const std::array<Direction, 2> dirs{a.direction, b.direction};
    const Direction middle((a.direction.phi() + b.direction.phi()) / 2);

    if (inst.model == GainModel::ideal) {
        if (merged) {
            beam.widths = {narrow};
            beam.gains = {n, n};
        } else if (inst.mode == BeamMode::single_beam) {
            const double width = required_width(dirs, inst.geom);
            beam.widths = {width};
            beam.gains = {ideal_gain(width), ideal_gain(width)};
        } else {
            beam.widths = {narrow, narrow};
            beam.gains = {n / 2, n / 2};
        }
        return beam;
    }

    Awv awv = steer_single(inst.geom, middle);
    if (merged || a.direction == b.direction) {
        beam.widths = {narrow};
    } else if (inst.mode == BeamMode::single_beam) {
        const double width = std::min(required_width(dirs, inst.geom), 2.0);
        awv = wide_beam(inst.geom, middle, width);
        beam.widths = {width};
    } else {
        const std::array<BeamTarget, 2> targets{BeamTarget{a.direction, n / 2}, BeamTarget{b.direction, n / 2}};
        awv = cm_optimize_multibeam(inst.geom, targets).awv;
        beam.widths = {narrow, narrow};
    }
    beam.gains = {beam_gain(awv, a.direction), beam_gain(awv, b.direction)};
    return beam;
}

PairingGroup evaluate_group(const PairingInstance& inst, const std::vector<int>& ids, bool merged) {
    PairingGroup group;
    group.user_ids = ids;
    group.beam = group_beam(inst, ids, merged);

    NomaGroup noma;
    noma.total_power = inst.group_power;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const double eff = user_of(inst, ids[i]).power() * group.beam.gains[i] / inst.noise_power;
        noma.members.push_back({ids[i], eff, 0.0});
    }
    if (noma.members.size() == 1) {
        noma.members[0].power = inst.group_power;
    } else {
        auto& x = noma.members[0];
        auto& y = noma.members[1];
        // The member decoded last (larger gain, ties to the larger id) is strong.
        const bool y_strong = y.effective_gain >= x.effective_gain;
        NomaMember& strong = y_strong ? y : x;
        NomaMember& weak = y_strong ? x : y;
        if (inst.policy == PowerPolicy::fixed_split) {
            const auto p = fixed_split(inst.group_power, inst.split);
            strong.power = p[0];
            weak.power = p[1];
        } else {
            const auto s = max_sum_rate_2user(strong.effective_gain, weak.effective_gain, inst.group_power, 0.0, 0.0);
            strong.power = s.powers[0];
            weak.power = s.powers[1];
        }
    }
    group.sum_rate = noma_rates(noma).sum_rate;
    return group;
}

class GroupCache {
public:
    explicit GroupCache(const PairingInstance& inst) : inst_(inst) {}

    const PairingGroup& get(const std::vector<int>& ids, bool merged) {
        const auto key = std::make_tuple(ids.front(), ids.size() > 1 ? ids[1] : ids.front(), merged);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            it = cache_.emplace(key, evaluate_group(inst_, ids, merged)).first;
        }
        return it->second;
    }

private:
    const PairingInstance& inst_;
    std::map<std::tuple<int, int, bool>, PairingGroup> cache_;
};

PairingPlan assemble(GroupCache& cache, std::vector<std::vector<int>> groups, std::vector<bool> merged) {
    merged.resize(groups.size(), false);
    std::vector<std::size_t> order(groups.size());
    for (auto& g : groups) {
        std::sort(g.begin(), g.end());
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return groups[a] < groups[b]; });

    PairingPlan plan;
    double total = 0.0;
    for (const std::size_t i : order) {
        plan.groups.push_back(cache.get(groups[i], merged[i]));
        total += plan.groups.back().sum_rate;
    }
    plan.objective = plan.groups.empty() ? 0.0 : total / static_cast<double>(plan.groups.size());
    return plan;
}

void check_partition(const PairingInstance& inst, const std::vector<std::vector<int>>& groups) {
    std::multiset<int> seen;
    for (const auto& g : groups) {
        if (g.empty() || g.size() > 2) {
            throw std::invalid_argument("pairing groups hold one or two users");
        }
        seen.insert(g.begin(), g.end());
    }
    std::multiset<int> all;
    for (const auto& u : inst.users) {
        all.insert(u.user_id);
    }
    if (seen != all) {
        throw std::invalid_argument("pairing groups must partition the user set");
    }
}

std::vector<int> sorted_ids(const PairingInstance& inst) {
    std::vector<int> ids;
    for (const auto& u : inst.users) {
        ids.push_back(u.user_id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

void PairingInstance::validate() const {
    if (users.size() < 2) {
        throw std::invalid_argument("pairing needs at least two users");
    }
    std::set<int> ids;
    for (const auto& u : users) {
        if (!ids.insert(u.user_id).second) {
            throw std::invalid_argument("duplicate user id " + std::to_string(u.user_id));
        }
    }
    if (!(group_power > 0.0) || !(noise_power > 0.0)) {
        throw std::invalid_argument("group and noise powers must be positive");
    }
    fixed_split(1.0, split);
}

PairingPlan evaluate_plan(const PairingInstance& instance, const std::vector<std::vector<int>>& groups,
                          const std::vector<bool>& merged) {
    instance.validate();
    check_partition(instance, groups);
    GroupCache cache(instance);
    return assemble(cache, groups, merged);
}

PairingPlan exhaustive_pairing(const PairingInstance& instance) {
    instance.validate();
    const int k = static_cast<int>(instance.users.size());
    if (k > kMaxExhaustiveUsers) {
        throw std::invalid_argument("exhaustive pairing supports at most 10 users, got " + std::to_string(k));
    }
    const auto ids = sorted_ids(instance);
    GroupCache cache(instance);

    PairingPlan best;
    bool have_best = false;
    std::vector<bool> used(ids.size(), false);
    std::vector<std::vector<int>> current;
    // Plans are generated in lexicographic group order; only strict
    // improvements replace the incumbent.
    auto recurse = [&](auto&& self, bool singleton_left) -> void {
        const auto first = std::find(used.begin(), used.end(), false);
        if (first == used.end()) {
            PairingPlan plan = assemble(cache, current, {});
            if (!have_best || plan.objective > best.objective) {
                best = std::move(plan);
                have_best = true;
            }
            return;
        }
        const auto u = static_cast<std::size_t>(first - used.begin());
        used[u] = true;
        if (singleton_left) {
            current.push_back({ids[u]});
            self(self, false);
            current.pop_back();
        }
        for (std::size_t v = u + 1; v < ids.size(); ++v) {
            if (used[v]) {
                continue;
            }
            used[v] = true;
            current.push_back({ids[u], ids[v]});
            self(self, singleton_left);
            current.pop_back();
            used[v] = false;
        }
        used[u] = false;
    };
    recurse(recurse, k % 2 == 1);
    return best;
}

PairingPlan strong_weak_heuristic(const PairingInstance& instance) {
    instance.validate();
    std::vector<const ChannelState*> ranked;
    for (const auto& u : instance.users) {
        ranked.push_back(&u);
    }
    std::sort(ranked.begin(), ranked.end(), [](const ChannelState* a, const ChannelState* b) {
        return a->power() != b->power() ? a->power() > b->power() : a->user_id < b->user_id;
    });
    std::vector<std::vector<int>> groups;
    std::size_t lo = 0;
    std::size_t hi = ranked.size() - 1;
    for (; lo < hi; ++lo, --hi) {
        groups.push_back({ranked[lo]->user_id, ranked[hi]->user_id});
    }
    if (lo == hi) {
        groups.push_back({ranked[lo]->user_id});
    }
    GroupCache cache(instance);
    return assemble(cache, groups, {});
}

PairingPlan angle_merge(const PairingInstance& instance, const PairingPlan& plan) {
    instance.validate();
    std::vector<std::vector<int>> groups;
    std::vector<bool> merged;
    for (const auto& g : plan.groups) {
        groups.push_back(g.user_ids);
        bool merge = g.beam.merged;
        if (g.user_ids.size() == 2) {
            const double gap = std::abs(user_of(instance, g.user_ids[0]).direction.phi() -
                                        user_of(instance, g.user_ids[1]).direction.phi());
            merge = merge || gap < instance.geom.min_width();
        }
        merged.push_back(merge);
    }
    check_partition(instance, groups);
    GroupCache cache(instance);
    return assemble(cache, groups, merged);
}

}  // namespace mmnoma
