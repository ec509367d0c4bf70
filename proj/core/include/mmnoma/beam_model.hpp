#pragma once

#include <span>
#include <vector>

#include "mmnoma/array_core.hpp"

namespace mmnoma {

// Idealized flat-top beam: gain G over [center - width/2, center + width/2],
// zero elsewhere.
struct BeamSpec {
    Direction center{0.0};
    double width = 2.0;
    double gain = 1.0;

    BeamSpec(Direction center, double width, double gain);

    double lower() const noexcept { return center.phi() - width / 2; }
    double upper() const noexcept { return center.phi() + width / 2; }
};

// A set of flat-top beams with disjoint interiors whose gain-width products
// fit the array's budget: sum G_i * B_i <= 2.
class IdealMultibeam {
public:
    static constexpr double kBudget = 2.0;
    static constexpr double kBudgetSlack = 1e-9;

    // Throws InfeasibleError when the budget is exceeded and
    // std::invalid_argument when beams overlap.
    explicit IdealMultibeam(std::vector<BeamSpec> beams);

    static bool is_feasible(std::span<const BeamSpec> beams);

    const std::vector<BeamSpec>& beams() const noexcept { return beams_; }
    double budget_used() const noexcept;

private:
    std::vector<BeamSpec> beams_;
};

// Gain of an ideal beam of the given width: 2 / B.
double ideal_gain(double width);

// Width needed for one beam to cover every direction: angular span plus a
// 2/N guard, never below 2/N.
double required_width(std::span<const Direction> directions, const ArrayGeometry& geom);

// Gain of the beam containing d, 0 if none does. Interval edges are closed;
// a direction on a shared edge belongs to the lower-indexed beam.
double ideal_gain_at(const IdealMultibeam& mb, Direction d);

}  // namespace mmnoma
