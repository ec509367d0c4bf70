#include "mmnoma/allocation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mmnoma {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRateSlack = 1e-9;
constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

// Users are reported as ids 1 and 2.
constexpr std::array<int, 2> kUserIds{1, 2};

// Maximizes f on [lo, hi] by golden-section search; returns the argmax.
template <typename F>
double golden_max(F&& f, double lo, double hi, double tol) {
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

std::array<double, 2> effective_gains(const AllocationProblem& p, std::span<const double> gains) {
    return {p.users[0].channel_power * gains[0] / p.noise_power, p.users[1].channel_power * gains[1] / p.noise_power};
}

bool meets_min_rates(const AllocationProblem& p, const RateReport& r) {
    return r.per_user[0].rate >= p.min_rates[0] - kRateSlack && r.per_user[1].rate >= p.min_rates[1] - kRateSlack;
}

// Closed-form powers {p_1, p_2} at fixed gains. The decoding order (and hence
// which user is weak) follows the effective gains, ties to user 2 as strong.
AllocationSolution closed_form_at(const AllocationProblem& p, std::span<const double> gains) {
    const auto eff = effective_gains(p, gains);
    const std::size_t strong = eff[1] >= eff[0] ? 1 : 0;
    const std::size_t weak = 1 - strong;
    const auto inner =
        max_sum_rate_2user(eff[strong], eff[weak], p.total_power, p.min_rates[weak], p.min_rates[strong]);
    AllocationSolution s;
    s.powers.assign(2, 0.0);
    s.powers[strong] = inner.powers[0];
    s.powers[weak] = inner.powers[1];
    s.gains.assign(gains.begin(), gains.end());
    const auto rates = two_user_rates(p, s.powers, s.gains);
    s.objective = rates.sum_rate;
    s.feasible = meets_min_rates(p, rates);
    return s;
}

double line_score(const AllocationProblem& p, double g2) {
    const std::array<double, 2> gains{p.geom.n() - g2, g2};
    const auto s = closed_form_at(p, gains);
    return s.feasible ? s.objective : kNegInf;
}

AllocationSolution attach_design(const AllocationProblem& p, const BeamDesigner& designer,
                                 std::span<const double> target_gains) {
    const std::array<BeamTarget, 2> targets{BeamTarget{p.users[0].direction, target_gains[0]},
                                            BeamTarget{p.users[1].direction, target_gains[1]}};
    DesignResult design = designer(p.geom, targets);
    AllocationSolution s = closed_form_at(p, design.achieved_gains);
    s.awv = std::move(design.awv);
    return s;
}

// Candidate ordering used by the alternating optimizer: feasibility first,
// then objective.
bool at_least_as_good(const AllocationSolution& cand, const AllocationSolution& cur) {
    if (cand.feasible != cur.feasible) {
        return cand.feasible;
    }
    return cand.objective >= cur.objective;
}

}  // namespace

void AllocationProblem::validate() const {
    if (users.size() != 2) {
        throw std::invalid_argument("allocation problems have exactly two users");
    }
    for (const auto& u : users) {
        if (!(u.channel_power >= 0.0)) {
            throw std::invalid_argument("channel power must be nonnegative");
        }
    }
    if (!(total_power > 0.0)) {
        throw std::invalid_argument("total power must be positive");
    }
    if (min_rates.size() != 2 || !(min_rates[0] >= 0.0) || !(min_rates[1] >= 0.0)) {
        throw std::invalid_argument("need two nonnegative minimum rates");
    }
    if (!(noise_power > 0.0)) {
        throw std::invalid_argument("noise power must be positive");
    }
    if (budget == GainBudget::fixed &&
        (fixed_gains.size() != 2 || !(fixed_gains[0] >= 0.0) || !(fixed_gains[1] >= 0.0))) {
        throw std::invalid_argument("fixed gain budget needs two nonnegative gains");
    }
}

std::vector<double> fixed_split(double total_power, std::span<const double> fractions) {
    if (!(total_power >= 0.0)) {
        throw std::invalid_argument("total power must be nonnegative");
    }
    double sum = 0.0;
    for (const double f : fractions) {
        if (!(f >= 0.0)) {
            throw std::invalid_argument("power fractions must be nonnegative");
        }
        sum += f;
    }
    if (fractions.empty() || std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("power fractions must sum to 1, got " + std::to_string(sum));
    }
    std::vector<double> powers;
    powers.reserve(fractions.size());
    for (const double f : fractions) {
        powers.push_back(f * total_power);
    }
    return powers;
}

AllocationSolution max_sum_rate_2user(double strong_gain, double weak_gain, double total_power,
                                      double min_rate_weak, double min_rate_strong) {
    if (!(weak_gain >= 0.0) || !(strong_gain >= weak_gain)) {
        throw std::invalid_argument("max_sum_rate_2user needs strong_gain >= weak_gain >= 0");
    }
    double p_weak = 0.0;
    if (min_rate_weak > 0.0) {
        const double lift = std::exp2(min_rate_weak);
        p_weak = weak_gain > 0.0 ? (lift - 1.0) * (total_power * weak_gain + 1.0) / (weak_gain * lift) : total_power;
        p_weak = std::clamp(p_weak, 0.0, total_power);
    }
    const double p_strong = total_power - p_weak;
    const double r_weak = std::log2(1.0 + p_weak * weak_gain / (weak_gain * p_strong + 1.0));
    const double r_strong = std::log2(1.0 + p_strong * strong_gain);

    AllocationSolution s;
    s.powers = {p_strong, p_weak};
    s.gains = {strong_gain, weak_gain};
    s.objective = r_weak + r_strong;
    s.feasible = r_weak >= min_rate_weak - kRateSlack && r_strong >= min_rate_strong - kRateSlack;
    return s;
}

RateReport two_user_rates(const AllocationProblem& problem, std::span<const double> powers,
                          std::span<const double> gains) {
    if (powers.size() != 2 || gains.size() != 2) {
        throw std::invalid_argument("two_user_rates needs two powers and two gains");
    }
    const auto eff = effective_gains(problem, gains);
    NomaGroup group;
    group.total_power = problem.total_power;
    for (std::size_t i = 0; i < 2; ++i) {
        group.members.push_back({kUserIds[i], eff[i], powers[i]});
    }
    return noma_rates(group);
}

AllocationSolution joint_power_gain_2user(const AllocationProblem& problem, const BeamDesigner* designer) {
    problem.validate();
    if (problem.budget == GainBudget::sum_budget) {
        throw std::invalid_argument("joint search runs on the G1 + G2 = N line; use the grid oracle for sum_budget");
    }
    if (problem.budget == GainBudget::fixed) {
        auto s = closed_form_at(problem, problem.fixed_gains);
        if (designer) {
            s = attach_design(problem, *designer, problem.fixed_gains);
        }
        return s;
    }

    const double n = problem.geom.n();
    constexpr int kGridPoints = 51;
    int best_j = 0;
    double best_score = kNegInf;
    for (int j = 0; j < kGridPoints; ++j) {
        const double score = line_score(problem, n * j / (kGridPoints - 1));
        if (score > best_score) {
            best_score = score;
            best_j = j;
        }
    }

    double g2 = n * best_j / (kGridPoints - 1);
    if (best_score == kNegInf) {
        g2 = n / 2;  // nothing feasible; report the balanced point
    } else {
        const double lo = n * std::max(0, best_j - 1) / (kGridPoints - 1);
        const double hi = n * std::min(kGridPoints - 1, best_j + 1) / (kGridPoints - 1);
        const double refined = golden_max([&](double x) { return line_score(problem, x); }, lo, hi, 1e-10 * n);
        if (line_score(problem, refined) > best_score) {
            g2 = refined;
        }
    }

    const std::array<double, 2> gains{n - g2, g2};
    if (designer) {
        return attach_design(problem, *designer, gains);
    }
    return closed_form_at(problem, gains);
}

AlternatingResult alternating_optimize(const AllocationProblem& problem, const BeamDesigner& designer, int max_iter,
                                       double eps, std::optional<AllocationSolution> start) {
    problem.validate();
    if (problem.budget != GainBudget::sum_line) {
        throw std::invalid_argument("alternating optimization runs on the G1 + G2 = N line");
    }
    const double n = problem.geom.n();

    AllocationSolution cur;
    if (start && start->awv) {
        cur = std::move(*start);
    } else {
        const std::array<double, 2> targets = start ? std::array<double, 2>{start->gains[0], start->gains[1]}
                                                    : std::array<double, 2>{n / 2, n / 2};
        const std::array<BeamTarget, 2> beam{BeamTarget{problem.users[0].direction, targets[0]},
                                             BeamTarget{problem.users[1].direction, targets[1]}};
        DesignResult design = designer(problem.geom, beam);
        cur.gains = design.achieved_gains;
        cur.awv = std::move(design.awv);
        if (start) {
            cur.powers = start->powers;
        } else {
            // fixed (1/4, 3/4) split between the strong and the weak user
            const auto eff = effective_gains(problem, cur.gains);
            cur.powers = eff[1] >= eff[0] ? std::vector<double>{0.75, 0.25} : std::vector<double>{0.25, 0.75};
            for (auto& p : cur.powers) {
                p *= problem.total_power;
            }
        }
        const auto rates = two_user_rates(problem, cur.powers, cur.gains);
        cur.objective = rates.sum_rate;
        cur.feasible = meets_min_rates(problem, rates);
    }

    AlternatingResult result;
    double previous = cur.objective;
    for (int it = 1; it <= std::max(1, max_iter); ++it) {
        // (a) powers at the current achieved gains
        AllocationSolution powered = closed_form_at(problem, cur.gains);
        powered.awv = cur.awv;
        if (at_least_as_good(powered, cur)) {
            cur = std::move(powered);
        }

        // (b) gain re-split at fixed powers, then a fresh AWV
        const auto powers = cur.powers;
        auto score = [&](double g2) {
            const std::array<double, 2> gains{n - g2, g2};
            const auto rates = two_user_rates(problem, powers, gains);
            return meets_min_rates(problem, rates) ? rates.sum_rate : kNegInf;
        };
        const double g2 = golden_max(score, 0.0, n, 1e-9 * n);
        const std::array<BeamTarget, 2> beam{BeamTarget{problem.users[0].direction, n - g2},
                                             BeamTarget{problem.users[1].direction, g2}};
        DesignResult design = designer(problem.geom, beam);
        AllocationSolution cand;
        cand.powers = powers;
        cand.gains = design.achieved_gains;
        cand.awv = std::move(design.awv);
        const auto rates = two_user_rates(problem, cand.powers, cand.gains);
        cand.objective = rates.sum_rate;
        cand.feasible = meets_min_rates(problem, rates);
        if (at_least_as_good(cand, cur) && (cand.feasible != cur.feasible || cand.objective > cur.objective)) {
            cur = std::move(cand);
        }

        result.objective_trace.push_back(cur.objective);
        result.iterations = it;
        if (cur.objective - previous < eps) {
            break;
        }
        previous = cur.objective;
    }
    result.solution = std::move(cur);
    return result;
}

AllocationSolution brute_force_alloc_oracle(const AllocationProblem& problem, int grid_p, int grid_g) {
    problem.validate();
    constexpr int kMaxGrid = 10000;
    if (grid_p < 1 || grid_g < 1 || grid_p > kMaxGrid || grid_g > kMaxGrid) {
        throw std::invalid_argument("oracle grid sizes must lie in [1, 10000]");
    }
    const double n = problem.geom.n();
    const double total = problem.total_power;
    auto at = [](double top, int i, int count) { return count == 1 ? 0.0 : top * i / (count - 1); };

    AllocationSolution best;
    best.objective = kNegInf;
    AllocationSolution first;
    bool have_first = false;
    auto consider = [&](double p1, double g1, double g2) {
        const std::array<double, 2> powers{p1, std::max(0.0, total - p1)};
        const std::array<double, 2> gains{g1, g2};
        const auto rates = two_user_rates(problem, powers, gains);
        if (!have_first) {
            first = {{powers.begin(), powers.end()}, {gains.begin(), gains.end()}, std::nullopt, rates.sum_rate, false};
            have_first = true;
        }
        if (meets_min_rates(problem, rates) && rates.sum_rate > best.objective) {
            best = {{powers.begin(), powers.end()}, {gains.begin(), gains.end()}, std::nullopt, rates.sum_rate, true};
        }
    };

    for (int i = 0; i < grid_p; ++i) {
        const double p1 = at(total, i, grid_p);
        if (problem.budget == GainBudget::fixed) {
            consider(p1, problem.fixed_gains[0], problem.fixed_gains[1]);
            continue;
        }
        for (int j = 0; j < grid_g; ++j) {
            const double g2 = at(n, j, grid_g);
            if (problem.budget == GainBudget::sum_line) {
                consider(p1, n - g2, g2);
                continue;
            }
            for (int l = 0; l < grid_g; ++l) {
                const double g1 = at(n, l, grid_g);
                if (g1 + g2 <= n * (1.0 + 1e-12)) {
                    consider(p1, g1, g2);
                }
            }
        }
    }
    return best.feasible ? best : first;
}

}  // namespace mmnoma
