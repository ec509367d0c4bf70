#include <doctest.h>

#include <array>
#include <random>

#include "mmnoma/beam_model.hpp"
#include "mmnoma/error.hpp"

using namespace mmnoma;

TEST_CASE("ideal gain is 2 / width") {
    CHECK(ideal_gain(2.0 / 32) == doctest::Approx(32.0));
    CHECK(ideal_gain(16.0 / 32) == doctest::Approx(4.0));
    CHECK(ideal_gain(2.0) == 1.0);
    CHECK_THROWS_AS(ideal_gain(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ideal_gain(-1.0), std::invalid_argument);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> width(1e-3, 2.0);
    for (int i = 0; i < 100; ++i) {
        const double b = width(rng);
        CHECK(ideal_gain(b) * b == doctest::Approx(2.0).epsilon(1e-15));
    }
}

TEST_CASE("required width is the span plus one narrow beam") {
    const ArrayGeometry g(32);
    const std::array<Direction, 1> one{Direction(0.3)};
    CHECK(required_width(one, g) == doctest::Approx(2.0 / 32));

    const std::array<Direction, 2> two{Direction(0.1), Direction(0.5)};
    CHECK(required_width(two, g) == doctest::Approx(0.4625));
    const std::array<Direction, 2> swapped{Direction(0.5), Direction(0.1)};
    CHECK(required_width(swapped, g) == required_width(two, g));

    const std::array<Direction, 2> same{Direction(-0.2), Direction(-0.2)};
    CHECK(required_width(same, g) == doctest::Approx(2.0 / 32));

    const std::array<Direction, 3> wider{Direction(0.1), Direction(0.5), Direction(0.6)};
    CHECK(required_width(wider, g) > required_width(two, g));
    CHECK_THROWS_AS(required_width(std::span<const Direction>{}, g), std::invalid_argument);
}

TEST_CASE("multibeam budget and overlap") {
    const double n = 32;
    const double w = 2.0 / n;
    const std::vector<BeamSpec> over{{Direction(-0.5), w, n}, {Direction(0.5), w, n}};
    CHECK_FALSE(IdealMultibeam::is_feasible(over));
    CHECK_THROWS_AS(IdealMultibeam{over}, InfeasibleError);

    const std::vector<BeamSpec> half{{Direction(-0.5), w, n / 2}, {Direction(0.5), w, n / 2}};
    CHECK(IdealMultibeam::is_feasible(half));
    const IdealMultibeam mb(half);
    CHECK(mb.budget_used() == doctest::Approx(2.0));

    const std::vector<BeamSpec> overlapping{{Direction(0.0), 0.2, 1.0}, {Direction(0.1), 0.2, 1.0}};
    CHECK_THROWS_AS(IdealMultibeam{overlapping}, std::invalid_argument);
}

TEST_CASE("ideal gain lookup") {
    // beams [0, 0.125] and [0.125, 0.25]: they touch at 0.125
    const IdealMultibeam mb({{Direction(0.0625), 0.125, 8.0}, {Direction(0.1875), 0.125, 4.0}});
    CHECK(ideal_gain_at(mb, Direction(0.05)) == 8.0);
    CHECK(ideal_gain_at(mb, Direction(0.2)) == 4.0);
    CHECK(ideal_gain_at(mb, Direction(-0.5)) == 0.0);
    CHECK(ideal_gain_at(mb, Direction(0.125)) == 8.0);
}
