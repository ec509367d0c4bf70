#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mmnoma/array_core.hpp"
#include "mmnoma/beam_design.hpp"
#include "mmnoma/rate_engine.hpp"

namespace mmnoma {

// Which beam gains the optimizer may choose.
enum class GainBudget {
    fixed,       // use AllocationProblem::fixed_gains as given
    sum_line,    // G_1 + G_2 = N (two narrow beams of width 2/N)
    sum_budget,  // G_1 + G_2 <= N; only the grid oracle searches it
};

struct UserLink {
    double channel_power = 1.0;  // |g|^2, linear
    Direction direction{0.0};
};

// Two-user downlink problem. User indices 0 and 1 correspond to "user 1" and
// "user 2"; which one is decoded first follows the effective gains.
struct AllocationProblem {
    ArrayGeometry geom{32};
    std::vector<UserLink> users;
    double total_power = 1.0;
    std::vector<double> min_rates{0.0, 0.0};
    double noise_power = 1.0;
    GainBudget budget = GainBudget::sum_line;
    std::vector<double> fixed_gains;  // used when budget == fixed

    void validate() const;
};

struct AllocationSolution {
    std::vector<double> powers;
    std::vector<double> gains;
    std::optional<Awv> awv;
    double objective = 0.0;
    bool feasible = false;
};

// p_i = fraction_i * P. Fractions must be nonnegative and sum to 1.
std::vector<double> fixed_split(double total_power, std::span<const double> fractions);

// Sum-rate optimum for two users with fixed effective gains (strong >= weak).
// Powers are returned as {p_strong, p_weak}. The weak user receives the
// smallest power that meets its minimum rate,
//   p_w = (2^r - 1)(P G_w + 1) / (G_w 2^r),
// and the strong user the rest.
AllocationSolution max_sum_rate_2user(double strong_gain, double weak_gain, double total_power,
                                      double min_rate_weak, double min_rate_strong);

// Rates of the two users at powers {p_1, p_2} and beam gains {G_1, G_2}.
RateReport two_user_rates(const AllocationProblem& problem, std::span<const double> powers,
                          std::span<const double> gains);

// Power/beam-gain search on G_1 + G_2 = N: 51-point grid in G_2, golden-section
// refinement around the best point, closed-form powers inside. When a designer
// is given, it synthesizes an AWV for the winning gains and the solution's gains
// become the achieved ones (the objective is re-evaluated at them).
AllocationSolution joint_power_gain_2user(const AllocationProblem& problem,
                                          const BeamDesigner* designer = nullptr);

struct AlternatingResult {
    AllocationSolution solution;
    std::vector<double> objective_trace;  // objective after each iteration
    int iterations = 0;
};

// Alternates closed-form powers at the current achieved gains with a gain
// re-split (one golden-section pass at fixed powers) and AWV re-design.
// A re-design that lowers the objective is rejected, so the trace never
// decreases. Stops when an iteration gains less than eps.
AlternatingResult alternating_optimize(const AllocationProblem& problem, const BeamDesigner& designer,
                                       int max_iter, double eps,
                                       std::optional<AllocationSolution> start = std::nullopt);

// Exhaustive search over p_1 in linspace(0, P, grid_p) and G_2 in
// linspace(0, N, grid_g). Ties keep the smaller p_1, then the smaller G_2.
// For GainBudget::sum_budget, G_1 is gridded independently with G_1 + G_2 <= N.
AllocationSolution brute_force_alloc_oracle(const AllocationProblem& problem, int grid_p, int grid_g);

}  // namespace mmnoma
