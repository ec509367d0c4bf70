#include <doctest.h>

#include <random>

#include "mmnoma/beam_design.hpp"
#include "mmnoma/error.hpp"
#include "oracles.hpp"

using namespace mmnoma;

namespace {

std::vector<oracle::cplx> as_vector(const Awv& w) {
    return {w.weights().data(), w.weights().data() + w.size()};
}

void check_cm_unit(const Awv& w) {
    CHECK(w.cm());
    CHECK(std::abs(w.weights().squaredNorm() - 1.0) <= 1e-9);
    const double mag = 1.0 / std::sqrt(static_cast<double>(w.size()));
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        CHECK(std::abs(std::abs(w.weights()[i]) - mag) <= 1e-9);
    }
}

void check_reported_gains(const DesignResult& r, const std::vector<BeamTarget>& targets) {
    REQUIRE(r.achieved_gains.size() == targets.size());
    const auto w = as_vector(r.awv);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        CHECK(std::abs(r.achieved_gains[i] - oracle::gain(w, targets[i].direction.phi())) <= 1e-9);
    }
    CHECK(r.iterations >= 1);
}

double min_over(const Awv& w, double lo, double hi, int points) {
    const auto weights = as_vector(w);
    double m = oracle::gain(weights, lo);
    for (int k = 1; k < points; ++k) {
        m = std::min(m, oracle::gain(weights, lo + (hi - lo) * k / (points - 1)));
    }
    return m;
}

}  // namespace

TEST_CASE("steer_single") {
    const ArrayGeometry g(32);
    const Awv w = steer_single(g, Direction(0.0));
    check_cm_unit(w);
    CHECK(beam_gain(w, Direction(0.0)) == doctest::Approx(32.0).epsilon(1e-12));
    CHECK(beam_gain(w, Direction(2.0 / 32)) < 1e-20);

    const Awv one = steer_single(ArrayGeometry(1), Direction(0.7));
    CHECK(std::abs(one.weights()[0]) == doctest::Approx(1.0));
    CHECK(beam_gain(one, Direction(-0.3)) == doctest::Approx(1.0));
}

TEST_CASE("wide beam with the narrowest width is a steered beam") {
    const ArrayGeometry g(16);
    const Awv w = wide_beam(g, Direction(0.2), 2.0 / 16);
    const Awv s = steer_single(g, Direction(0.2));
    CHECK((w.weights() - s.weights()).norm() < 1e-12);
}

TEST_CASE("wide beam keeps half the ideal gain across the interval") {
    const ArrayGeometry g32(32);
    const Awv w = wide_beam(g32, Direction(0.0), 8.0 / 32);
    check_cm_unit(w);
    CHECK(min_over(w, -4.0 / 32, 4.0 / 32, 2001) >= 4.0);

    for (const int n : {16, 32, 64}) {
        for (const double center : {-0.3, 0.0, 0.45}) {
            for (int k = 2; k <= n; k *= 2) {
                const double width = 2.0 * k / n;
                CAPTURE(n);
                CAPTURE(center);
                CAPTURE(width);
                const Awv b = wide_beam(ArrayGeometry(n), Direction(center), width);
                CHECK(min_over(b, center - width / 2, center + width / 2, 16 * n + 1) >= 0.5 * 2.0 / width);
            }
        }
    }
}

TEST_CASE("full-width beam is near isotropic") {
    const Awv w = wide_beam(ArrayGeometry(32), Direction(0.0), 2.0);
    const auto weights = as_vector(w);
    for (int k = 0; k <= 2000; ++k) {
        const double gain = oracle::gain(weights, -1.0 + k / 1000.0);
        CHECK(gain >= 0.5);
        CHECK(gain <= 2.0);
    }
}

TEST_CASE("wide beam rejects widths outside [2/N, 2]") {
    const ArrayGeometry g(32);
    CHECK_THROWS_AS(wide_beam(g, Direction(0.0), 1.0 / 32), std::invalid_argument);
    CHECK_THROWS_AS(wide_beam(g, Direction(0.0), 2.5), std::invalid_argument);
}

TEST_CASE("sub-array multibeam") {
    const ArrayGeometry g(32);
    const std::vector<BeamTarget> single{{Direction(0.3), 32.0}};
    const auto s = subarray_multibeam(g, single);
    CHECK(s.achieved_gains[0] == doctest::Approx(32.0).epsilon(1e-12));
    CHECK((s.awv.weights() - steer_single(g, Direction(0.3)).weights()).norm() < 1e-12);

    const std::vector<BeamTarget> pair{{Direction(-0.5), 16.0}, {Direction(0.5), 16.0}};
    const auto r = subarray_multibeam(g, pair, std::vector<int>{16, 16});
    check_cm_unit(r.awv);
    check_reported_gains(r, pair);
    for (const double a : r.achieved_gains) {
        CHECK(a == doctest::Approx(8.0).epsilon(0.15));
    }

    const std::vector<BeamTarget> close{{Direction(0.0), 16.0}, {Direction(0.02), 16.0}};
    const auto c = subarray_multibeam(g, close);
    check_reported_gains(c, close);
    CHECK(c.min_ratio == doctest::Approx(std::min(c.achieved_gains[0], c.achieved_gains[1]) / 16.0));

    std::vector<BeamTarget> too_many;
    for (int i = 0; i < 5; ++i) {
        too_many.push_back({Direction(-0.8 + 0.4 * i), 1.0});
    }
    CHECK_THROWS_AS(subarray_multibeam(ArrayGeometry(4), too_many), std::invalid_argument);
    CHECK_THROWS_AS(subarray_multibeam(g, std::vector<BeamTarget>{}), std::invalid_argument);
    CHECK_THROWS_AS(subarray_multibeam(g, pair, std::vector<int>{10, 10}), std::invalid_argument);
    CHECK_THROWS_AS(subarray_multibeam(g, pair, std::vector<int>{32, 0}), std::invalid_argument);
}

TEST_CASE("sub-array sizes follow the square-root gains") {
    const ArrayGeometry g(32);
    // sqrt gains 4 : 2 : 2 -> 16 / 8 / 8 antennas; a 16-antenna steered
    // sub-array alone gives (16 / sqrt(32))^2 = 8 at its target.
    const std::vector<BeamTarget> t{{Direction(-0.6), 16.0}, {Direction(0.0), 4.0}, {Direction(0.6), 4.0}};
    const auto r = subarray_multibeam(g, t);
    const auto& w = r.awv.weights();
    const double slope = kPi * -0.6;
    for (int e = 1; e < 16; ++e) {
        CHECK(std::abs(std::arg(w[e] * std::conj(w[e - 1])) - std::remainder(slope, 2 * kPi)) < 1e-9);
    }
    CHECK(std::abs(std::arg(w[16] * std::conj(w[15])) - std::remainder(slope, 2 * kPi)) > 1e-6);
}

TEST_CASE("sub-array beams respect the gain-width budget") {
    const ArrayGeometry g(32);
    const std::vector<BeamTarget> t{{Direction(-0.5), 16.0}, {Direction(0.4), 16.0}};
    const auto r = subarray_multibeam(g, t);
    const auto w = as_vector(r.awv);
    double total = 0.0;
    for (const auto& target : t) {
        const double phi = target.direction.phi();
        const double peak = oracle::gain(w, phi);
        double lo = phi;
        double hi = phi;
        constexpr double step = 1e-5;
        while (oracle::gain(w, lo - step) >= peak / 2) {
            lo -= step;
        }
        while (oracle::gain(w, hi + step) >= peak / 2) {
            hi += step;
        }
        total += peak * (hi - lo);
    }
    CHECK(total >= 1.5);
    CHECK(total <= 2.5);
}

TEST_CASE("cm_optimize") {
    const ArrayGeometry g32(32);
    const std::vector<BeamTarget> one{{Direction(0.1), 32.0}};
    const auto s = cm_optimize_multibeam(g32, one);
    CHECK(s.achieved_gains[0] == doctest::Approx(32.0).epsilon(1e-9));
    CHECK((s.awv.weights() - steer_single(g32, Direction(0.1)).weights()).norm() < 1e-6);

    const ArrayGeometry g8(8);
    const std::vector<BeamTarget> two{{Direction(-0.6), 2.0}, {Direction(0.6), 2.0}};
    const auto r = cm_optimize_multibeam(g8, two);
    check_cm_unit(r.awv);
    check_reported_gains(r, two);
    CHECK(r.achieved_gains[0] >= 1.8);
    CHECK(r.achieved_gains[1] >= 1.8);
    CHECK_FALSE(r.shortfall);

    const std::vector<BeamTarget> over{{Direction(-0.5), 32.0}, {Direction(0.5), 32.0}};
    CHECK_THROWS_AS(cm_optimize_multibeam(g32, over), InfeasibleError);
}

TEST_CASE("cm_optimize relaxed objective never increases") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> phi(-0.95, 0.95);
    std::uniform_real_distribution<double> share(0.1, 0.9);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = trial % 2 == 0 ? 16 : 32;
        const double a = share(rng);
        const std::vector<BeamTarget> t{{Direction(phi(rng)), a * n}, {Direction(phi(rng)), (1 - a) * n}};
        const auto r = cm_optimize_multibeam(ArrayGeometry(n), t);
        check_reported_gains(r, t);
        CHECK(r.alpha_history.size() == static_cast<std::size_t>(r.iterations));
        for (std::size_t i = 1; i < r.alpha_history.size(); ++i) {
            CHECK(r.alpha_history[i] <= r.alpha_history[i - 1]);
        }
        // |a^H w| <= N * max|w_n|, so alpha can't undercut sqrt(G) / N
        for (const auto& target : t) {
            CHECK(r.alpha >= std::sqrt(target.target_gain) / n * (1.0 - 1e-9));
        }
    }
}

TEST_CASE("zero-gain targets are ignored") {
    const ArrayGeometry g(16);
    const std::vector<BeamTarget> t{{Direction(-0.4), 0.0}, {Direction(0.3), 16.0}};
    const auto r = cm_optimize_multibeam(g, t);
    CHECK(r.achieved_gains[1] == doctest::Approx(16.0).epsilon(1e-9));
    CHECK(r.min_ratio == doctest::Approx(r.achieved_gains[1] / 16.0));
}

TEST_CASE("exhaustive oracle") {
    const std::vector<BeamTarget> broadside{{Direction(0.0), 2.0}};
    const auto r = exhaustive_cm_oracle(ArrayGeometry(2), broadside, 4);
    CHECK(r.awv.phases()[0] == 0.0);
    CHECK(r.awv.phases()[1] == 0.0);
    CHECK(r.achieved_gains[0] == doctest::Approx(2.0));

    // N = 3, Q = 4 against a plain enumeration over all 16 phase pairs
    const std::vector<BeamTarget> t{{Direction(-0.3), 1.5}, {Direction(0.55), 1.0}};
    const auto best = exhaustive_cm_oracle(ArrayGeometry(3), t, 4);
    double expected = -1.0;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const std::vector<oracle::cplx> w{std::polar(1 / std::sqrt(3.0), 0.0),
                                              std::polar(1 / std::sqrt(3.0), oracle::kPi * a / 2),
                                              std::polar(1 / std::sqrt(3.0), oracle::kPi * b / 2)};
            const double ratio = std::min(oracle::gain(w, -0.3) / 1.5, oracle::gain(w, 0.55) / 1.0);
            expected = std::max(expected, ratio);
        }
    }
    CHECK(best.min_ratio == doctest::Approx(expected).epsilon(1e-12));
    check_reported_gains(best, t);

    CHECK_THROWS_AS(exhaustive_cm_oracle(ArrayGeometry(11), t, 2), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_cm_oracle(ArrayGeometry(10), t, 16), std::invalid_argument);
}

TEST_CASE("fine-grid oracle dominates the sub-array designer") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> phi(-0.9, 0.9);
    std::uniform_real_distribution<double> gain(0.5, 2.0);
    const ArrayGeometry g(4);
    for (int trial = 0; trial < 5; ++trial) {
        const std::vector<BeamTarget> t{{Direction(phi(rng)), gain(rng)}, {Direction(phi(rng)), gain(rng)}};
        const auto oracle_result = exhaustive_cm_oracle(g, t, 64);
        CAPTURE(trial);
        CHECK(subarray_multibeam(g, t).min_ratio <= oracle_result.min_ratio + 1e-12);
    }
}

TEST_CASE("designers are deterministic") {
    const ArrayGeometry g(16);
    const std::vector<BeamTarget> t{{Direction(-0.2), 6.0}, {Direction(0.7), 9.0}};
    CHECK(cm_optimize_multibeam(g, t).awv.weights() == cm_optimize_multibeam(g, t).awv.weights());
    CHECK(subarray_multibeam(g, t).awv.weights() == subarray_multibeam(g, t).awv.weights());
    CHECK(wide_beam(g, Direction(0.1), 0.5).weights() == wide_beam(g, Direction(0.1), 0.5).weights());
}
