#include "mmnoma/array_core.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace mmnoma {

Direction::Direction(double phi) : phi_(phi) {
    if (!(phi >= -1.0 && phi <= 1.0)) {
        throw std::invalid_argument("direction cosine must lie in [-1, 1], got " + std::to_string(phi));
    }
}

ArrayGeometry::ArrayGeometry(int n_antennas) : n_(n_antennas) {
    if (n_antennas < 1) {
        throw std::invalid_argument("array needs at least one antenna");
    }
}

Awv::Awv(cvec weights, bool cm) : w_(std::move(weights)), cm_(cm) {
    if (w_.size() == 0) {
        throw std::invalid_argument("empty antenna weight vector");
    }
    const double norm2 = w_.squaredNorm();
    if (std::abs(norm2 - 1.0) > kAwvTolerance) {
        throw std::invalid_argument("AWV must have unit norm, got squared norm " + std::to_string(norm2));
    }
    if (cm_) {
        const double mag = 1.0 / std::sqrt(static_cast<double>(w_.size()));
        for (Eigen::Index n = 0; n < w_.size(); ++n) {
            if (std::abs(std::abs(w_[n]) - mag) > kAwvTolerance) {
                throw std::invalid_argument("AWV flagged constant-modulus has weight " + std::to_string(n) +
                                            " of magnitude " + std::to_string(std::abs(w_[n])));
            }
        }
    }
}

Awv Awv::normalized(const cvec& weights) {
    const double norm = weights.norm();
    if (!(norm > 0.0)) {
        throw std::invalid_argument("cannot normalize a zero weight vector");
    }
    return Awv(weights / norm, false);
}

Awv Awv::from_phases(const std::vector<double>& phases) {
    const auto n = static_cast<Eigen::Index>(phases.size());
    cvec w(n);
    const double mag = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        w[i] = std::polar(mag, phases[static_cast<std::size_t>(i)]);
    }
    return Awv(std::move(w), true);
}

Awv Awv::project_cm(const cvec& weights) {
    std::vector<double> phases(static_cast<std::size_t>(weights.size()));
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        phases[static_cast<std::size_t>(i)] = weights[i] == cplx{0.0, 0.0} ? 0.0 : std::arg(weights[i]);
    }
    return from_phases(phases);
}

std::vector<double> Awv::phases() const {
    std::vector<double> out(static_cast<std::size_t>(w_.size()));
    for (Eigen::Index i = 0; i < w_.size(); ++i) {
        out[static_cast<std::size_t>(i)] = std::arg(w_[i]);
    }
    return out;
}

cvec steering_vector(const ArrayGeometry& geom, Direction d) {
    cvec a(geom.n());
    for (int n = 0; n < geom.n(); ++n) {
        a[n] = std::polar(1.0, kPi * n * d.phi());
    }
    return a;
}

double beam_gain_at(const cvec& w, double phi) {
    // w^H a(phi) with a(phi)[n] = z^n generated by recurrence.
    const cplx z = std::polar(1.0, kPi * phi);
    cplx zn{1.0, 0.0};
    cplx acc{0.0, 0.0};
    for (Eigen::Index n = 0; n < w.size(); ++n) {
        acc += std::conj(w[n]) * zn;
        zn *= z;
    }
    return std::norm(acc);
}

double beam_gain(const Awv& w, Direction d) {
    return beam_gain_at(w.weights(), d.phi());
}

std::vector<PatternPoint> pattern(const Awv& w, int grid_size) {
    if (grid_size < 2) {
        throw std::invalid_argument("pattern grid needs at least 2 points");
    }
    std::vector<PatternPoint> out;
    out.reserve(static_cast<std::size_t>(grid_size));
    for (int k = 0; k < grid_size; ++k) {
        // Pin the last point to exactly +1.
        const double phi = k + 1 == grid_size ? 1.0 : -1.0 + 2.0 * k / (grid_size - 1);
        out.push_back({phi, beam_gain_at(w.weights(), phi)});
    }
    return out;
}

double min_gain_over(const Awv& w, double lo, double hi, int grid_size) {
    if (grid_size < 2 || !(hi >= lo)) {
        throw std::invalid_argument("min_gain_over needs lo <= hi and at least 2 points");
    }
    double best = beam_gain_at(w.weights(), lo);
    for (int k = 1; k < grid_size; ++k) {
        const double phi = lo + (hi - lo) * k / (grid_size - 1);
        best = std::min(best, beam_gain_at(w.weights(), phi));
    }
    return best;
}

ChannelState sample_channel(const UserChannelSpec& spec, std::uint64_t seed) {
    if (!(spec.avg_power >= 0.0)) {
        throw std::invalid_argument("average channel power must be nonnegative");
    }
    std::mt19937_64 rng(seed);
    ChannelState ch;
    ch.user_id = spec.user_id;
    ch.direction = spec.direction;
    ch.avg_power = spec.avg_power;
    if (spec.fading == Fading::deterministic) {
        std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
        ch.gain = std::polar(std::sqrt(spec.avg_power), phase(rng));
    } else {
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double scale = std::sqrt(spec.avg_power / 2.0);
        const double re = gauss(rng);
        const double im = gauss(rng);
        ch.gain = {scale * re, scale * im};
    }
    return ch;
}

}  // namespace mmnoma
