#include "scenario_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mmnoma::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path + ": " + message);
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
        fail(path, "expected an object");
    }
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) {
            fail(path.empty() ? key : path + "." + key, "unknown key");
        }
    }
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        fail(path, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        fail(path, "expected a finite number");
    }
    return x;
}

long long integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) {
        fail(path, "expected an integer");
    }
    return v.get<long long>();
}

std::string text(const json& v, const std::string& path) {
    if (!v.is_string()) {
        fail(path, "expected a string");
    }
    return v.get<std::string>();
}

const json& array(const json& v, const std::string& path) {
    if (!v.is_array()) {
        fail(path, "expected an array");
    }
    return v;
}

std::vector<double> numbers(const json& v, const std::string& path) {
    std::vector<double> out;
    for (std::size_t i = 0; i < array(v, path).size(); ++i) {
        out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

template <typename Enum>
Enum choice(const json& v, const std::string& path, std::initializer_list<std::pair<const char*, Enum>> options) {
    const std::string s = text(v, path);
    std::string names;
    for (const auto& [name, value] : options) {
        if (s == name) {
            return value;
        }
        names += names.empty() ? name : std::string("|") + name;
    }
    fail(path, "expected one of " + names + ", got \"" + s + "\"");
}

// 1-based line:col of a byte offset.
std::string position(const std::string& src, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < src.size(); ++i) {
        if (src[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

SweepSpec parse_sweep(const json& v) {
    reject_unknown(v, "sweep", {"variable", "start", "stop", "points", "values"});
    SweepSpec s;
    if (!v.contains("variable")) {
        fail("sweep.variable", "missing");
    }
    s.variable = text(v["variable"], "sweep.variable");
    if (s.variable != "snr_db" && s.variable != "beta" && s.variable != "g2") {
        fail("sweep.variable", "expected snr_db, beta or g2, got \"" + s.variable + "\"");
    }
    if (v.contains("values")) {
        if (v.contains("start") || v.contains("stop") || v.contains("points")) {
            fail("sweep", "give either values or start/stop/points, not both");
        }
        s.values = numbers(v["values"], "sweep.values");
        if (s.values.empty()) {
            fail("sweep.values", "must not be empty");
        }
        return s;
    }
    for (const char* key : {"start", "stop", "points"}) {
        if (!v.contains(key)) {
            fail(std::string("sweep.") + key, "missing (or give values)");
        }
    }
    s.start = number(v["start"], "sweep.start");
    s.stop = number(v["stop"], "sweep.stop");
    const long long points = integer(v["points"], "sweep.points");
    if (points < 1 || points > 100000) {
        fail("sweep.points", "must lie in [1, 100000]");
    }
    s.points = static_cast<int>(points);
    return s;
}

}  // namespace

std::vector<double> SweepSpec::grid() const {
    if (!values.empty()) {
        return values;
    }
    std::vector<double> out;
    const int n = points.value_or(1);
    for (int i = 0; i < n; ++i) {
        out.push_back(n == 1 ? *start : *start + (*stop - *start) * i / (n - 1));
    }
    return out;
}

double ScenarioConfig::total_power() const {
    return noise_power * std::pow(10.0, snr_db / 10.0);
}

ScenarioConfig parse_config(const std::string& src) {
    json root;
    try {
        root = json::parse(src);
    } catch (const json::parse_error& e) {
        throw ConfigError("config syntax error at " + position(src, e.byte) + ": " + e.what());
    }
    reject_unknown(root, "",
                   {"n_antennas", "noise_power", "snr_db", "users", "power_split", "beam_mode", "gain_model", "sweep",
                    "widths_over_2n", "beta", "tdma_beam_gain", "groups", "precoder", "designer", "targets", "seed"});

    ScenarioConfig c;
    if (root.contains("n_antennas")) {
        const long long n = integer(root["n_antennas"], "n_antennas");
        if (n < 1 || n > 4096) {
            fail("n_antennas", "must lie in [1, 4096]");
        }
        c.n_antennas = static_cast<int>(n);
    }
    if (root.contains("noise_power")) {
        c.noise_power = number(root["noise_power"], "noise_power");
        if (!(c.noise_power > 0.0)) {
            fail("noise_power", "must be positive");
        }
    }
    if (root.contains("snr_db")) {
        c.snr_db = number(root["snr_db"], "snr_db");
        if (std::abs(c.snr_db) > 200.0) {
            fail("snr_db", "must lie in [-200, 200]");
        }
    }
    if (!root.contains("users")) {
        fail("users", "missing");
    }
    const json& users = array(root["users"], "users");
    for (std::size_t i = 0; i < users.size(); ++i) {
        const std::string path = "users[" + std::to_string(i) + "]";
        reject_unknown(users[i], path, {"avg_power_db", "direction_cos"});
        UserConfig u;
        if (!users[i].contains("direction_cos")) {
            fail(path + ".direction_cos", "missing");
        }
        u.direction_cos = number(users[i]["direction_cos"], path + ".direction_cos");
        if (u.direction_cos < -1.0 || u.direction_cos > 1.0) {
            fail(path + ".direction_cos", "must lie in [-1, 1]");
        }
        if (users[i].contains("avg_power_db")) {
            u.avg_power_db = number(users[i]["avg_power_db"], path + ".avg_power_db");
            if (std::abs(u.avg_power_db) > 200.0) {
                fail(path + ".avg_power_db", "must lie in [-200, 200]");
            }
        }
        c.users.push_back(u);
    }
    if (root.contains("power_split")) {
        c.power_split = numbers(root["power_split"], "power_split");
        const double sum = c.power_split.size() == 2 ? c.power_split[0] + c.power_split[1] : 0.0;
        if (c.power_split.size() != 2 || c.power_split[0] < 0.0 || c.power_split[1] < 0.0 ||
            std::abs(sum - 1.0) > 1e-9) {
            fail("power_split", "expected two nonnegative fractions summing to 1");
        }
    }
    if (root.contains("beam_mode")) {
        c.beam_mode = choice(root["beam_mode"], "beam_mode",
                             {std::pair{"single", BeamMode::single_beam}, std::pair{"multi", BeamMode::multi_beam}});
    }
    if (root.contains("gain_model")) {
        c.gain_model = choice(root["gain_model"], "gain_model",
                              {std::pair{"ideal", GainModel::ideal}, std::pair{"physical", GainModel::physical}});
    }
    if (root.contains("sweep")) {
        c.sweep = parse_sweep(root["sweep"]);
    }
    if (root.contains("widths_over_2n")) {
        c.widths_over_2n = numbers(root["widths_over_2n"], "widths_over_2n");
        if (c.widths_over_2n.empty()) {
            fail("widths_over_2n", "must not be empty");
        }
        for (std::size_t i = 0; i < c.widths_over_2n.size(); ++i) {
            if (c.widths_over_2n[i] < 1.0 || c.widths_over_2n[i] > c.n_antennas) {
                fail("widths_over_2n[" + std::to_string(i) + "]", "must lie in [1, n_antennas]");
            }
        }
    }
    if (root.contains("beta")) {
        c.beta = number(root["beta"], "beta");
        if (!(c.beta > 0.0)) {
            fail("beta", "must be positive");
        }
    }
    if (root.contains("tdma_beam_gain")) {
        c.tdma_beam_gain = choice(root["tdma_beam_gain"], "tdma_beam_gain",
                                  {std::pair{"full", TdmaGain::full}, std::pair{"matched", TdmaGain::matched}});
    }
    if (root.contains("groups")) {
        const json& groups = array(root["groups"], "groups");
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const std::string path = "groups[" + std::to_string(g) + "]";
            std::vector<int> ids;
            for (std::size_t i = 0; i < array(groups[g], path).size(); ++i) {
                const std::string at = path + "[" + std::to_string(i) + "]";
                const long long id = integer(groups[g][i], at);
                if (id < 1 || id > static_cast<long long>(c.users.size())) {
                    fail(at, "user ids run from 1 to the number of users");
                }
                ids.push_back(static_cast<int>(id));
            }
            if (ids.empty()) {
                fail(path, "must not be empty");
            }
            c.groups.push_back(std::move(ids));
        }
    }
    if (root.contains("precoder")) {
        c.precoder = choice(root["precoder"], "precoder",
                            {std::pair{"identity", Precoder::identity}, std::pair{"zero_forcing", Precoder::zero_forcing}});
    }
    if (root.contains("designer")) {
        c.designer = choice(root["designer"], "designer",
                            {std::pair{"cm_optimize", DesignerKind::cm_optimize}, std::pair{"subarray", DesignerKind::subarray}});
    }
    if (root.contains("targets")) {
        const json& targets = array(root["targets"], "targets");
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const std::string path = "targets[" + std::to_string(i) + "]";
            reject_unknown(targets[i], path, {"direction_cos", "gain"});
            for (const char* key : {"direction_cos", "gain"}) {
                if (!targets[i].contains(key)) {
                    fail(path + "." + key, "missing");
                }
            }
            TargetConfig t{number(targets[i]["direction_cos"], path + ".direction_cos"),
                           number(targets[i]["gain"], path + ".gain")};
            if (t.direction_cos < -1.0 || t.direction_cos > 1.0) {
                fail(path + ".direction_cos", "must lie in [-1, 1]");
            }
            if (t.gain < 0.0) {
                fail(path + ".gain", "must be nonnegative");
            }
            c.targets.push_back(t);
        }
    }
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) {
            fail("seed", "expected a nonnegative integer");
        }
        c.seed = root["seed"].get<std::uint64_t>();
    }
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path + ": cannot open config file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string serialize_config(const ScenarioConfig& c) {
    json root;
    root["n_antennas"] = c.n_antennas;
    root["noise_power"] = c.noise_power;
    root["snr_db"] = c.snr_db;
    root["users"] = json::array();
    for (const auto& u : c.users) {
        root["users"].push_back({{"avg_power_db", u.avg_power_db}, {"direction_cos", u.direction_cos}});
    }
    root["power_split"] = c.power_split;
    root["beam_mode"] = c.beam_mode == BeamMode::single_beam ? "single" : "multi";
    root["gain_model"] = c.gain_model == GainModel::ideal ? "ideal" : "physical";
    if (c.sweep) {
        json s{{"variable", c.sweep->variable}};
        if (!c.sweep->values.empty()) {
            s["values"] = c.sweep->values;
        } else {
            s["start"] = *c.sweep->start;
            s["stop"] = *c.sweep->stop;
            s["points"] = *c.sweep->points;
        }
        root["sweep"] = s;
    }
    root["widths_over_2n"] = c.widths_over_2n;
    root["beta"] = c.beta;
    if (c.tdma_beam_gain) {
        root["tdma_beam_gain"] = *c.tdma_beam_gain == TdmaGain::full ? "full" : "matched";
    }
    if (!c.groups.empty()) {
        root["groups"] = c.groups;
    }
    root["precoder"] = c.precoder == Precoder::identity ? "identity" : "zero_forcing";
    root["designer"] = c.designer == DesignerKind::cm_optimize ? "cm_optimize" : "subarray";
    if (!c.targets.empty()) {
        root["targets"] = json::array();
        for (const auto& t : c.targets) {
            root["targets"].push_back({{"direction_cos", t.direction_cos}, {"gain", t.gain}});
        }
    }
    root["seed"] = c.seed;
    return root.dump(2) + "\n";
}

}  // namespace mmnoma::cli
