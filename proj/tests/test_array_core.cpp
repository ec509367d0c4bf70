#include <doctest.h>

#include <random>

#include "mmnoma/array_core.hpp"
#include "oracles.hpp"

using namespace mmnoma;

namespace {

Awv random_awv(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    cvec w(n);
    for (int i = 0; i < n; ++i) {
        w[i] = {gauss(rng), gauss(rng)};
    }
    return Awv::normalized(w);
}

std::vector<oracle::cplx> as_vector(const Awv& w) {
    return {w.weights().data(), w.weights().data() + w.size()};
}

}  // namespace

TEST_CASE("direction rejects values outside [-1, 1]") {
    CHECK_NOTHROW(Direction(-1.0));
    CHECK_NOTHROW(Direction(1.0));
    CHECK_THROWS_AS(Direction(1.5), std::invalid_argument);
    CHECK_THROWS_AS(Direction(-1.0000001), std::invalid_argument);
    CHECK_THROWS_AS(ArrayGeometry(0), std::invalid_argument);
}

TEST_CASE("steering vector entries") {
    const cvec a4 = steering_vector(ArrayGeometry(4), Direction(0.0));
    for (int n = 0; n < 4; ++n) {
        CHECK(std::abs(a4[n] - cplx{1.0, 0.0}) < 1e-15);
    }
    const cvec a2 = steering_vector(ArrayGeometry(2), Direction(1.0));
    CHECK(std::abs(a2[1] - cplx{-1.0, 0.0}) < 1e-15);

    const cvec a8 = steering_vector(ArrayGeometry(8), Direction(0.5));
    const std::array<cplx, 4> period{cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
    for (int n = 0; n < 8; ++n) {
        CHECK(std::abs(a8[n] - period[static_cast<std::size_t>(n % 4)]) < 1e-12);
    }
    CHECK(a8.squaredNorm() == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("awv invariants are enforced") {
    cvec w = cvec::Constant(4, cplx{0.5, 0.0});
    CHECK_NOTHROW(Awv(w, true));
    w[0] = {0.6, 0.0};
    CHECK_THROWS_AS(Awv(w, false), std::invalid_argument);
    cvec uneven(2);
    uneven << cplx{0.6, 0.0}, cplx{0.8, 0.0};
    CHECK_NOTHROW(Awv(uneven, false));
    CHECK_THROWS_AS(Awv(uneven, true), std::invalid_argument);
    CHECK_THROWS_AS(Awv::normalized(cvec::Zero(3)), std::invalid_argument);

    const Awv cm = Awv::project_cm(uneven);
    CHECK(cm.cm());
    CHECK(std::abs(std::abs(cm.weights()[1]) - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("steered gain, first null and reciprocity") {
    const ArrayGeometry g(32);
    const cvec a = steering_vector(g, Direction(0.0)) / std::sqrt(32.0);
    const Awv w(a, true);
    CHECK(beam_gain(w, Direction(0.0)) == doctest::Approx(32.0).epsilon(1e-12));
    CHECK(beam_gain(w, Direction(2.0 / 32)) < 1e-20);

    const Awv w1(steering_vector(g, Direction(0.3)) / std::sqrt(32.0), true);
    const Awv w2(steering_vector(g, Direction(-0.45)) / std::sqrt(32.0), true);
    CHECK(beam_gain(w1, Direction(-0.45)) == doctest::Approx(beam_gain(w2, Direction(0.3))).epsilon(1e-9));
}

TEST_CASE("beam gain matches a term-by-term evaluation and stays in [0, N]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> phi(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 40;
        const Awv w = random_awv(n, rng);
        const auto weights = as_vector(w);
        for (int k = 0; k < 20; ++k) {
            const double p = phi(rng);
            const double got = beam_gain(w, Direction(p));
            CHECK(got == doctest::Approx(oracle::gain(weights, p)).epsilon(1e-9));
            CHECK(got >= 0.0);
            CHECK(got <= n * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("pattern grid and gain conservation") {
    const ArrayGeometry g(8);
    const Awv w(steering_vector(g, Direction(0.25)) / std::sqrt(8.0), true);
    const auto three = pattern(w, 3);
    REQUIRE(three.size() == 3);
    CHECK(three[0].phi == -1.0);
    CHECK(three[1].phi == 0.0);
    CHECK(three[2].phi == 1.0);

    const auto dense = pattern(w, 4097);
    const auto peak = std::max_element(dense.begin(), dense.end(),
                                       [](const PatternPoint& a, const PatternPoint& b) { return a.gain < b.gain; });
    CHECK(peak->phi == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(peak->gain == doctest::Approx(8.0).epsilon(1e-6));

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Awv r = random_awv(16, rng);
        const auto pts = pattern(r, 4096);
        double mean = 0.0;
        for (const auto& p : pts) {
            mean += p.gain;
        }
        mean /= static_cast<double>(pts.size());
        CHECK(std::abs(mean - 1.0) <= 1e-3);
        const auto weights = as_vector(r);
        CHECK(std::abs(oracle::half_integral([&](double x) { return oracle::gain(weights, x); }, 4096) - 1.0) < 1e-9);
    }
    CHECK_THROWS_AS(pattern(w, 1), std::invalid_argument);
}

TEST_CASE("channel sampling") {
    const UserChannelSpec zero{1, Direction(0.0), 0.0, Fading::deterministic};
    CHECK(sample_channel(zero, 3).gain == cplx{0.0, 0.0});

    const UserChannelSpec four{2, Direction(0.2), 4.0, Fading::deterministic};
    const ChannelState c = sample_channel(four, 9);
    CHECK(std::abs(c.gain) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c.power() == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(sample_channel(four, 9).gain == c.gain);
    CHECK(sample_channel(four, 10).gain != c.gain);

    const UserChannelSpec ray{3, Direction(0.0), 1.0, Fading::rayleigh};
    double mean = 0.0;
    constexpr int kSamples = 100000;
    for (int s = 0; s < kSamples; ++s) {
        mean += sample_channel(ray, static_cast<std::uint64_t>(s)).power();
    }
    CHECK(std::abs(mean / kSamples - 1.0) <= 0.02);

    const UserChannelSpec negative{4, Direction(0.0), -1.0, Fading::deterministic};
    CHECK_THROWS_AS(sample_channel(negative, 0), std::invalid_argument);
}
