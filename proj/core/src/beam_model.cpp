#include "mmnoma/beam_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mmnoma/error.hpp"

namespace mmnoma {

BeamSpec::BeamSpec(Direction c, double w, double g) : center(c), width(w), gain(g) {
    if (!(w > 0.0)) {
        throw std::invalid_argument("beam width must be positive");
    }
    if (!(g >= 0.0)) {
        throw std::invalid_argument("beam gain must be nonnegative");
    }
}

namespace {

double budget_of(std::span<const BeamSpec> beams) {
    double used = 0.0;
    for (const auto& b : beams) {
        used += b.gain * b.width;
    }
    return used;
}

// Interiors must not overlap; touching edges are allowed.
bool disjoint(std::span<const BeamSpec> beams) {
    for (std::size_t i = 0; i < beams.size(); ++i) {
        for (std::size_t j = i + 1; j < beams.size(); ++j) {
            const double lo = std::max(beams[i].lower(), beams[j].lower());
            const double hi = std::min(beams[i].upper(), beams[j].upper());
            if (hi - lo > 1e-12) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

IdealMultibeam::IdealMultibeam(std::vector<BeamSpec> beams) : beams_(std::move(beams)) {
    if (!disjoint(beams_)) {
        throw std::invalid_argument("ideal beams overlap");
    }
    if (budget_of(beams_) > kBudget + kBudgetSlack) {
        throw InfeasibleError("ideal multibeam exceeds the gain-width budget of 2 (uses " +
                              std::to_string(budget_of(beams_)) + ")");
    }
}

bool IdealMultibeam::is_feasible(std::span<const BeamSpec> beams) {
    return disjoint(beams) && budget_of(beams) <= kBudget + kBudgetSlack;
}

double IdealMultibeam::budget_used() const noexcept {
    return budget_of(beams_);
}

double ideal_gain(double width) {
    if (!(width > 0.0)) {
        throw std::invalid_argument("beam width must be positive");
    }
    return 2.0 / width;
}

double required_width(std::span<const Direction> directions, const ArrayGeometry& geom) {
    if (directions.empty()) {
        throw std::invalid_argument("required_width needs at least one direction");
    }
    const auto [lo, hi] = std::minmax_element(directions.begin(), directions.end(),
                                              [](Direction a, Direction b) { return a.phi() < b.phi(); });
    const double span = hi->phi() - lo->phi();
    return std::max(span + geom.min_width(), geom.min_width());
}

double ideal_gain_at(const IdealMultibeam& mb, Direction d) {
    for (const auto& b : mb.beams()) {
        if (d.phi() >= b.lower() && d.phi() <= b.upper()) {
            return b.gain;
        }
    }
    return 0.0;
}

}  // namespace mmnoma
