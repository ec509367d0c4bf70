#include "mmnoma/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace mmnoma::csv {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

template <typename T, typename Fmt>
std::string join_with(const std::vector<T>& values, Fmt fmt) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ';';
        }
        out += fmt(values[i]);
    }
    return out;
}

}  // namespace

std::string join(const std::vector<double>& values) {
    return join_with(values, [](double v) { return num(v); });
}

std::string join(const std::vector<int>& values) {
    return join_with(values, [](int v) { return std::to_string(v); });
}

double to_db(double linear) {
    if (!(linear > 0.0)) {
        return kMinGainDb;
    }
    return std::max(kMinGainDb, 10.0 * std::log10(linear));
}

void write_pattern(std::ostream& out, const std::vector<PatternPoint>& points) {
    out << "phi,gain_linear,gain_db\n";
    for (const auto& p : points) {
        out << num(p.phi) << ',' << num(p.gain) << ',' << num(to_db(p.gain)) << '\n';
    }
}

void write_rate_report(std::ostream& out, std::string_view scenario_id, const RateReport& report, bool header) {
    if (header) {
        out << "scenario_id,user_id,rate_bps_hz,sum_rate,min_rate\n";
    }
    for (const auto& u : report.per_user) {
        out << scenario_id << ',' << u.user_id << ',' << num(u.rate) << ',' << num(report.sum_rate) << ','
            << num(report.min_rate) << '\n';
    }
}

void write_allocation(std::ostream& out, std::string_view instance_id, const AllocationSolution& solution,
                      bool header) {
    if (header) {
        out << "instance_id,p1,p2,g1,g2,objective,feasible\n";
    }
    auto at = [](const std::vector<double>& v, std::size_t i) { return i < v.size() ? v[i] : 0.0; };
    out << instance_id << ',' << num(at(solution.powers, 0)) << ',' << num(at(solution.powers, 1)) << ','
        << num(at(solution.gains, 0)) << ',' << num(at(solution.gains, 1)) << ',' << num(solution.objective) << ','
        << (solution.feasible ? "true" : "false") << '\n';
}

void write_pairing_plan(std::ostream& out, std::string_view plan_id, const PairingPlan& plan, bool header) {
    if (header) {
        out << "plan_id,group_id,user_ids,beam_width,beam_gains,objective\n";
    }
    for (std::size_t g = 0; g < plan.groups.size(); ++g) {
        const auto& group = plan.groups[g];
        out << plan_id << ',' << g << ',' << join(group.user_ids) << ',' << join(group.beam.widths) << ','
            << join(group.beam.gains) << ',' << num(plan.objective) << '\n';
    }
}

void write_hybrid(std::ostream& out, const HybridReport& report, bool header) {
    if (header) {
        out << "mode,chain_id,user_id,rate,mui_power\n";
    }
    for (const auto& row : report.rows) {
        out << report.mode << ',' << row.chain_id << ',' << row.user_id << ',' << num(row.rate) << ','
            << num(row.mui_power) << '\n';
    }
}

void write_awv_phases(std::ostream& out, const Awv& awv) {
    out << "index,phase_rad\n";
    const auto phases = awv.phases();
    for (std::size_t i = 0; i < phases.size(); ++i) {
        out << i << ',' << num(phases[i]) << '\n';
    }
}

void write_design_targets(std::ostream& out, const std::vector<BeamTarget>& targets, const DesignResult& result) {
    out << "phi,target_gain,achieved_gain\n";
    for (std::size_t i = 0; i < targets.size(); ++i) {
        out << num(targets[i].direction.phi()) << ',' << num(targets[i].target_gain) << ','
            << num(result.achieved_gains[i]) << '\n';
    }
}

int Table::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

}  // namespace

Table read(std::istream& in) {
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (first) {
            t.header = split_line(line);
            first = false;
        } else {
            t.rows.push_back(split_line(line));
        }
    }
    return t;
}

}  // namespace mmnoma::csv
