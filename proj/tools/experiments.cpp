#include "experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mmnoma/allocation.hpp"
#include "mmnoma/beam_model.hpp"
#include "mmnoma/csv.hpp"
#include "mmnoma/rate_engine.hpp"

namespace mmnoma::cli {

namespace {

double from_db(double db) {
    return std::pow(10.0, db / 10.0);
}

void require_two_users(const ScenarioConfig& c, const char* command) {
    if (c.users.size() != 2) {
        throw ConfigError(std::string(command) + " needs exactly 2 users, config has " +
                          std::to_string(c.users.size()));
    }
}

std::vector<double> sweep_grid(const ScenarioConfig& c, const std::string& variable, std::vector<double> fallback) {
    if (!c.sweep) {
        return fallback;
    }
    if (c.sweep->variable != variable) {
        throw ConfigError("sweep.variable: this command sweeps " + variable + ", got \"" + c.sweep->variable + "\"");
    }
    return c.sweep->grid();
}

// Two-user NOMA sum rate with the configured {strong, weak} split; the strong
// user is the one decoded last.
double noma_pair_sum(double gain1, double gain2, double total_power, const std::vector<double>& split) {
    const auto p = fixed_split(total_power, split);
    const bool second_strong = gain2 >= gain1;
    NomaGroup g;
    g.total_power = total_power;
    g.members.push_back({1, gain1, second_strong ? p[1] : p[0]});
    g.members.push_back({2, gain2, second_strong ? p[0] : p[1]});
    return noma_rates(g).sum_rate;
}

double tdma_pair_sum(double gain1, double gain2, double total_power) {
    const std::array<TdmaUser, 2> users{TdmaUser{1, gain1, 0.5}, TdmaUser{2, gain2, 0.5}};
    return tdma_rates(users, total_power).sum_rate;
}

// Splits the users' total linear channel power by ratio beta = h_1 / h_2.
std::array<double, 2> channels_for_beta(const ScenarioConfig& c, double beta) {
    if (!(beta > 0.0)) {
        throw ConfigError("beta values must be positive");
    }
    const double total = from_db(c.users[0].avg_power_db) + from_db(c.users[1].avg_power_db);
    return {total * beta / (1.0 + beta), total / (1.0 + beta)};
}

std::uint64_t channel_seed(std::uint64_t seed, int user_id) {
    return seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(user_id));
}

const ChannelState& channel_of(const std::vector<ChannelState>& channels, int id) {
    return *std::find_if(channels.begin(), channels.end(), [id](const ChannelState& c) { return c.user_id == id; });
}

Awv group_beam(const ScenarioConfig& c, const ArrayGeometry& geom, const std::vector<ChannelState>& channels,
               const std::vector<int>& ids) {
    if (ids.size() == 1) {
        return steer_single(geom, channel_of(channels, ids[0]).direction);
    }
    const Direction a = channel_of(channels, ids[0]).direction;
    const Direction b = channel_of(channels, ids[1]).direction;
    const Direction middle((a.phi() + b.phi()) / 2);
    if (a == b) {
        return steer_single(geom, a);
    }
    if (c.beam_mode == BeamMode::single_beam) {
        const std::array<Direction, 2> dirs{a, b};
        return wide_beam(geom, middle, std::min(required_width(dirs, geom), 2.0));
    }
    const std::array<BeamTarget, 2> targets{BeamTarget{a, geom.n() / 2.0}, BeamTarget{b, geom.n() / 2.0}};
    CmOptimizeOptions opt;
    opt.restart_seed = c.seed;
    return c.designer == DesignerKind::subarray ? subarray_multibeam(geom, targets).awv
                                                : cm_optimize_multibeam(geom, targets, opt).awv;
}

std::vector<std::vector<int>> hybrid_groups(const ScenarioConfig& c) {
    if (c.groups.empty()) {
        std::vector<std::vector<int>> out;
        for (const auto& g : strong_weak_heuristic(pairing_instance(c)).groups) {
            out.push_back(g.user_ids);
        }
        return out;
    }
    std::set<int> seen;
    for (const auto& g : c.groups) {
        if (g.size() > 2) {
            throw ConfigError("groups: each group holds one or two users");
        }
        for (const int id : g) {
            if (!seen.insert(id).second) {
                throw ConfigError("groups: user " + std::to_string(id) + " appears twice");
            }
        }
    }
    if (seen.size() != c.users.size()) {
        throw ConfigError("groups: every user must belong to exactly one group");
    }
    return c.groups;
}

template <typename Write>
std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name, Write&& write) {
    const auto path = dir / name;
    std::ostringstream buf;
    write(buf);
    std::ofstream out(path, std::ios::binary);
    out << buf.str();
    out.close();
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return path;
}

}  // namespace

std::vector<SnrRow> sweep_snr(const ScenarioConfig& c) {
    require_two_users(c, "sweep-snr");
    const double n = c.n_antennas;
    const std::array<double, 2> h{from_db(c.users[0].avg_power_db), from_db(c.users[1].avg_power_db)};
    std::vector<double> snrs;
    for (int db = 0; db <= 30; db += 2) {
        snrs.push_back(db);
    }
    std::vector<SnrRow> rows;
    for (const double snr : sweep_grid(c, "snr_db", snrs)) {
        const double p = c.noise_power * from_db(snr);
        for (const double mult : c.widths_over_2n) {
            const double gain = ideal_gain(mult * 2.0 / n);
            const double tdma_gain = c.tdma_beam_gain.value_or(TdmaGain::full) == TdmaGain::full ? n : gain;
            rows.push_back({snr, mult,
                            noma_pair_sum(h[0] * gain / c.noise_power, h[1] * gain / c.noise_power, p, c.power_split),
                            tdma_pair_sum(h[0] * tdma_gain / c.noise_power, h[1] * tdma_gain / c.noise_power, p)});
        }
    }
    return rows;
}

std::vector<BetaRow> sweep_beta(const ScenarioConfig& c) {
    require_two_users(c, "sweep-beta");
    const double n = c.n_antennas;
    const double gain = n / 2;
    const double tdma_gain = c.tdma_beam_gain.value_or(TdmaGain::matched) == TdmaGain::full ? n : gain;
    const double p = c.total_power();
    std::vector<BetaRow> rows;
    for (const double beta : sweep_grid(c, "beta", {1.0, 2.0, 4.0, 8.0})) {
        const auto h = channels_for_beta(c, beta);
        rows.push_back({beta, noma_pair_sum(h[0] * gain / c.noise_power, h[1] * gain / c.noise_power, p, c.power_split),
                        tdma_pair_sum(h[0] * tdma_gain / c.noise_power, h[1] * tdma_gain / c.noise_power, p)});
    }
    return rows;
}

std::vector<GainRow> sweep_gain(const ScenarioConfig& c) {
    require_two_users(c, "sweep-gain");
    const double n = c.n_antennas;
    const auto h = channels_for_beta(c, c.beta);
    const double p = c.total_power();
    std::vector<GainRow> rows;
    for (const double g2 : sweep_grid(c, "g2", {n / 2, 3 * n / 8, n / 4, n / 8, n / 16})) {
        if (g2 < 0.0 || g2 > n) {
            throw ConfigError("sweep g2 values must lie in [0, n_antennas]");
        }
        rows.push_back({g2, noma_pair_sum(h[0] * (n - g2) / c.noise_power, h[1] * g2 / c.noise_power, p, c.power_split)});
    }
    return rows;
}

std::vector<ChannelState> user_channels(const ScenarioConfig& c) {
    std::vector<ChannelState> out;
    for (std::size_t i = 0; i < c.users.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        const UserChannelSpec spec{id, Direction(c.users[i].direction_cos), from_db(c.users[i].avg_power_db),
                                   Fading::deterministic};
        out.push_back(sample_channel(spec, channel_seed(c.seed, id)));
    }
    return out;
}

PairingInstance pairing_instance(const ScenarioConfig& c) {
    PairingInstance inst;
    inst.users = user_channels(c);
    inst.geom = ArrayGeometry(c.n_antennas);
    inst.mode = c.beam_mode;
    inst.model = c.gain_model;
    inst.group_power = c.total_power();
    inst.noise_power = c.noise_power;
    inst.split = {c.power_split[0], c.power_split[1]};
    return inst;
}

PairingDemo pairing_demo(const ScenarioConfig& c) {
    const PairingInstance inst = pairing_instance(c);
    PairingDemo demo;
    demo.exhaustive = exhaustive_pairing(inst);
    demo.heuristic = strong_weak_heuristic(inst);
    demo.exhaustive_merged = angle_merge(inst, demo.exhaustive);
    demo.heuristic_merged = angle_merge(inst, demo.heuristic);
    return demo;
}

HybridConfig hybrid_setup(const ScenarioConfig& c, const std::vector<ChannelState>& channels) {
    const ArrayGeometry geom(c.n_antennas);
    const auto groups = hybrid_groups(c);
    HybridConfig hc;
    hc.mode = 1;
    hc.precoder = c.precoder;
    const double chain_power = c.total_power() / static_cast<double>(groups.size());
    for (std::size_t m = 0; m < groups.size(); ++m) {
        RfChainPlan chain{static_cast<int>(m) + 1, group_beam(c, geom, channels, groups[m]), {}, chain_power};
        if (groups[m].size() == 1) {
            chain.members.push_back({groups[m][0], chain_power});
        } else {
            std::array<double, 2> gain{};
            for (std::size_t i = 0; i < 2; ++i) {
                const ChannelState& ch = channel_of(channels, groups[m][i]);
                gain[i] = ch.power() * beam_gain(chain.awv, ch.direction);
            }
            const auto p = fixed_split(chain_power, c.power_split);
            // larger effective gain is strong; ties go to the larger id
            const bool second_strong = gain[1] > gain[0] || (gain[1] == gain[0] && groups[m][1] > groups[m][0]);
            chain.members.push_back({groups[m][0], second_strong ? p[1] : p[0]});
            chain.members.push_back({groups[m][1], second_strong ? p[0] : p[1]});
        }
        hc.chains.push_back(std::move(chain));
    }
    return hc;
}

HybridDemo hybrid_demo(const ScenarioConfig& c) {
    const auto channels = user_channels(c);
    HybridConfig hc = hybrid_setup(c, channels);
    hc.max_users_per_chain = 2;
    HybridDemo demo;
    demo.mode1 = mode1_evaluate(hc, channels, c.noise_power, false);
    demo.mode1_ignore_mui = mode1_evaluate(hc, channels, c.noise_power, true);
    hc.mode = 2;
    demo.mode2 = mode2_evaluate(hc, channels, c.noise_power);
    return demo;
}

DesignDemo design_beam(const ScenarioConfig& c) {
    if (c.targets.empty()) {
        throw ConfigError("targets: design-beam needs at least one target");
    }
    std::vector<BeamTarget> targets;
    for (const auto& t : c.targets) {
        targets.push_back({Direction(t.direction_cos), t.gain});
    }
    const ArrayGeometry geom(c.n_antennas);
    CmOptimizeOptions opt;
    opt.restart_seed = c.seed;
    DesignResult result = c.designer == DesignerKind::subarray ? subarray_multibeam(geom, targets)
                                                               : cm_optimize_multibeam(geom, targets, opt);
    return DesignDemo{std::move(targets), std::move(result)};
}

std::vector<std::filesystem::path> run_named(const std::string& command, const ScenarioConfig& config,
                                             const std::filesystem::path& out_dir, const RunOptions& options) {
    if (std::find(command_names().begin(), command_names().end(), command) == command_names().end()) {
        throw ConfigError("unknown command \"" + command + "\"");
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) {
        throw IoError("cannot create output directory " + out_dir.string());
    }
    using csv::num;
    std::vector<std::filesystem::path> written;

    if (command == "sweep-snr") {
        const auto rows = sweep_snr(config);
        written.push_back(write_file(out_dir, "sweep_snr.csv", [&](std::ostream& out) {
            out << "snr_db,B_over_2N,noma_sum_rate,tdma_sum_rate\n";
            for (const auto& r : rows) {
                out << num(r.snr_db) << ',' << num(r.b_over_2n) << ',' << num(r.noma_sum_rate) << ','
                    << num(r.tdma_sum_rate) << '\n';
            }
        }));
    } else if (command == "sweep-beta") {
        const auto rows = sweep_beta(config);
        written.push_back(write_file(out_dir, "sweep_beta.csv", [&](std::ostream& out) {
            out << "beta,noma_sum_rate,tdma_sum_rate\n";
            for (const auto& r : rows) {
                out << num(r.beta) << ',' << num(r.noma_sum_rate) << ',' << num(r.tdma_sum_rate) << '\n';
            }
        }));
    } else if (command == "sweep-gain") {
        const auto rows = sweep_gain(config);
        written.push_back(write_file(out_dir, "sweep_gain.csv", [&](std::ostream& out) {
            out << "g2,noma_sum_rate\n";
            for (const auto& r : rows) {
                out << num(r.g2) << ',' << num(r.noma_sum_rate) << '\n';
            }
        }));
    } else if (command == "pairing-demo") {
        const auto demo = pairing_demo(config);
        written.push_back(write_file(out_dir, "pairing.csv", [&](std::ostream& out) {
            csv::write_pairing_plan(out, "exhaustive", demo.exhaustive, true);
            csv::write_pairing_plan(out, "heuristic", demo.heuristic, false);
            csv::write_pairing_plan(out, "exhaustive_merged", demo.exhaustive_merged, false);
            csv::write_pairing_plan(out, "heuristic_merged", demo.heuristic_merged, false);
        }));
    } else if (command == "hybrid-demo") {
        const auto demo = hybrid_demo(config);
        const HybridReport& mode1 = options.ignore_mui ? demo.mode1_ignore_mui : demo.mode1;
        written.push_back(write_file(out_dir, "hybrid_mode1.csv", [&](std::ostream& out) { csv::write_hybrid(out, mode1); }));
        written.push_back(write_file(out_dir, "hybrid_mode1_ignore_mui.csv",
                                     [&](std::ostream& out) { csv::write_hybrid(out, demo.mode1_ignore_mui); }));
        written.push_back(
            write_file(out_dir, "hybrid_mode2.csv", [&](std::ostream& out) { csv::write_hybrid(out, demo.mode2); }));
    } else {
        if (options.grid < 2) {
            throw ConfigError("--grid must be at least 2");
        }
        const auto demo = design_beam(config);
        written.push_back(
            write_file(out_dir, "design_awv.csv", [&](std::ostream& out) { csv::write_awv_phases(out, demo.result.awv); }));
        written.push_back(write_file(out_dir, "design_targets.csv", [&](std::ostream& out) {
            csv::write_design_targets(out, demo.targets, demo.result);
        }));
        written.push_back(write_file(out_dir, "design_pattern.csv", [&](std::ostream& out) {
            csv::write_pattern(out, pattern(demo.result.awv, options.grid));
        }));
    }
    return written;
}

}  // namespace mmnoma::cli
