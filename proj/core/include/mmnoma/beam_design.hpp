#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mmnoma/array_core.hpp"

namespace mmnoma {

struct BeamTarget {
    Direction direction{0.0};
    double target_gain = 0.0;  // power gain
};

struct DesignResult {
    Awv awv;
    std::vector<double> achieved_gains;  // beam_gain(awv, target_i)
    // Smallest max-weight magnitude at which the design (before unit-norm
    // projection) meets every target amplitude sqrt(G_i).
    double alpha = 0.0;
    int iterations = 1;
    // min_i achieved_i / target_i over targets with positive gain.
    double min_ratio = 0.0;
    bool shortfall = false;
    // Relaxed objective after every alternating iteration (cm_optimize only).
    std::vector<double> alpha_history;
};

// Signature shared by the multi-beam designers, used by the allocation module.
using BeamDesigner =
    std::function<DesignResult(const ArrayGeometry&, std::span<const BeamTarget>)>;

// min_i achieved_i / target_i; +inf when no target is positive.
double min_target_ratio(std::span<const double> achieved, std::span<const BeamTarget> targets);

// w = a(phi) / sqrt(N).
Awv steer_single(const ArrayGeometry& geom, Direction d);

// Constant-modulus beam covering [center - B/2, center + B/2], 2/N <= B <= 2.
// Starts from ceil(B*N/2) contiguous sub-arrays steered across the interval with
// searched per-sub-array phases, then refines the per-element phases to keep
// the in-beam gain between half and twice the ideal 2/B. The lower bound holds
// for B >= 4/N and N >= 16; B = 2/N returns steer_single.
Awv wide_beam(const ArrayGeometry& geom, Direction center, double width);

// Sub-array multi-beam: sub-array m is steered at target m and rotated by
// exp(j*theta_m), theta_1 = 0 and the rest picked on a 64-point grid to
// maximize the minimum achieved/target ratio. Default sizes are proportional
// to sqrt(G_m).
DesignResult subarray_multibeam(const ArrayGeometry& geom, std::span<const BeamTarget> targets,
                                std::optional<std::vector<int>> sizes = std::nullopt);

struct CmOptimizeOptions {
    double tol = 1e-6;
    int max_iter = 50;
    // Extra random psi initializations after the psi = 0 run; the design with
    // the largest min achieved/target ratio is returned.
    int restarts = 8;
    std::uint64_t restart_seed = 0;
};

// Relaxed multi-beam design: alternates between
//   min alpha  s.t. |w_n| <= alpha,  Re(exp(-j psi_i) a(phi_i)^H w) >= sqrt(G_i)
// and psi_i <- arg(a(phi_i)^H w), then projects onto constant modulus.
// Throws InfeasibleError when sum G_i * 2/N > 2 * (1 + tol).
DesignResult cm_optimize_multibeam(const ArrayGeometry& geom, std::span<const BeamTarget> targets,
                                   const CmOptimizeOptions& options = {});

// Largest number of candidate AWVs the exhaustive oracle will enumerate.
inline constexpr std::uint64_t kMaxOracleCandidates = std::uint64_t{1} << 28;

// Enumerates every constant-modulus AWV with phases 2*pi*k/Q (first phase 0)
// and keeps the one with the largest min achieved/target ratio. Ties go to
// the lexicographically smallest phase-index tuple. N <= 10.
DesignResult exhaustive_cm_oracle(const ArrayGeometry& geom, std::span<const BeamTarget> targets,
                                  int phase_levels);

// Designer adaptors.
BeamDesigner cm_optimize_designer(CmOptimizeOptions options = {});
BeamDesigner subarray_designer();

}  // namespace mmnoma
