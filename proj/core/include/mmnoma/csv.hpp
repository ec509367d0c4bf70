#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mmnoma/allocation.hpp"
#include "mmnoma/array_core.hpp"
#include "mmnoma/beam_design.hpp"
#include "mmnoma/hybrid.hpp"
#include "mmnoma/pairing.hpp"
#include "mmnoma/rate_engine.hpp"

namespace mmnoma::csv {

// Fixed 9-significant-digit text ("%.9g").
std::string num(double v);

// Joins values with ';' so lists fit in one CSV field.
std::string join(const std::vector<double>& values);
std::string join(const std::vector<int>& values);

// Floor applied before converting a zero gain to dB.
inline constexpr double kMinGainDb = -300.0;
double to_db(double linear);

void write_pattern(std::ostream& out, const std::vector<PatternPoint>& points);
void write_rate_report(std::ostream& out, std::string_view scenario_id, const RateReport& report,
                       bool header = true);
void write_allocation(std::ostream& out, std::string_view instance_id,
                      const AllocationSolution& solution, bool header = true);
void write_pairing_plan(std::ostream& out, std::string_view plan_id, const PairingPlan& plan,
                        bool header = true);
void write_hybrid(std::ostream& out, const HybridReport& report, bool header = true);
void write_awv_phases(std::ostream& out, const Awv& awv);
void write_design_targets(std::ostream& out, const std::vector<BeamTarget>& targets,
                          const DesignResult& result);

// Minimal reader for the files above: header names plus rows of raw fields.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(std::string_view name) const;  // -1 if absent
};
Table read(std::istream& in);

}  // namespace mmnoma::csv
