#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace mmnoma {

using cvec = Eigen::VectorXcd;
using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Tolerance on the unit-norm and constant-modulus invariants of an Awv.
inline constexpr double kAwvTolerance = 1e-9;

// Direction in the cosine-angle domain, phi = cos(physical angle), -1 <= phi <= 1.
class Direction {
public:
    explicit Direction(double phi);

    double phi() const noexcept { return phi_; }

    friend bool operator==(const Direction&, const Direction&) = default;

private:
    double phi_;
};

// Half-wavelength uniform linear array with N elements.
class ArrayGeometry {
public:
    explicit ArrayGeometry(int n_antennas);

    int n() const noexcept { return n_; }
    // Narrowest beam width of the array in the cosine-angle domain.
    double min_width() const noexcept { return 2.0 / n_; }

    friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;

private:
    int n_;
};

// Antenna weight vector. Always unit norm; when cm() is true every weight
// has magnitude 1/sqrt(N).
class Awv {
public:
    // Validates the invariants; throws std::invalid_argument when violated.
    Awv(cvec weights, bool cm);

    // Scales an arbitrary nonzero vector to unit norm.
    static Awv normalized(const cvec& weights);
    // Constant-modulus vector exp(j*phases[n]) / sqrt(N).
    static Awv from_phases(const std::vector<double>& phases);
    // Projects each weight onto the constant-modulus circle, keeping its phase.
    // Zero weights get phase 0.
    static Awv project_cm(const cvec& weights);

    const cvec& weights() const noexcept { return w_; }
    bool cm() const noexcept { return cm_; }
    int size() const noexcept { return static_cast<int>(w_.size()); }
    std::vector<double> phases() const;

private:
    cvec w_;
    bool cm_;
};

enum class Fading { deterministic, rayleigh };

// Single-path channel of one user.
struct ChannelState {
    int user_id = 0;
    Direction direction{0.0};
    cplx gain{0.0, 0.0};
    double avg_power = 0.0;  // E|g|^2, linear

    double power() const noexcept { return std::norm(gain); }
};

struct UserChannelSpec {
    int user_id = 0;
    Direction direction{0.0};
    double avg_power = 1.0;
    Fading fading = Fading::deterministic;
};

struct PatternPoint {
    double phi;
    double gain;
};

// a(phi)[n] = exp(j*pi*n*phi), n = 0..N-1.
cvec steering_vector(const ArrayGeometry& geom, Direction d);

// Power gain |w^H a(phi)|^2.
double beam_gain(const Awv& w, Direction d);

// Same as beam_gain but for any phi (the pattern is 2-periodic in phi, so
// directions outside [-1, 1] alias back into the visible region).
double beam_gain_at(const cvec& w, double phi);

// Gains on grid_size uniformly spaced points covering [-1, 1], endpoints included.
std::vector<PatternPoint> pattern(const Awv& w, int grid_size);

// Minimum gain over [lo, hi] sampled on grid_size uniformly spaced points.
double min_gain_over(const Awv& w, double lo, double hi, int grid_size);

// Draws the complex path gain. Deterministic fading fixes |g|^2 = avg_power
// with a seeded uniform phase; Rayleigh draws g ~ CN(0, avg_power).
ChannelState sample_channel(const UserChannelSpec& spec, std::uint64_t seed);

}  // namespace mmnoma
