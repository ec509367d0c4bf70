#include "mmnoma/beam_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "mmnoma/error.hpp"

namespace mmnoma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kThetaLevels = 64;
constexpr double kShortfallRatio = 0.9;

void validate_targets(const ArrayGeometry& geom, std::span<const BeamTarget> targets) {
    if (targets.empty()) {
        throw std::invalid_argument("beam design needs at least one target");
    }
    if (static_cast<int>(targets.size()) > geom.n()) {
        throw std::invalid_argument("more beam targets (" + std::to_string(targets.size()) +
                                    ") than antennas (" + std::to_string(geom.n()) + ")");
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!(targets[i].target_gain >= 0.0)) {
            throw std::invalid_argument("target gains must be nonnegative");
        }
        for (std::size_t j = i + 1; j < targets.size(); ++j) {
            if (targets[i].direction == targets[j].direction) {
                throw std::invalid_argument("beam target directions must be distinct");
            }
        }
    }
}

std::vector<double> achieved_gains_of(const Awv& w, std::span<const BeamTarget> targets) {
    std::vector<double> out;
    out.reserve(targets.size());
    for (const auto& t : targets) {
        out.push_back(beam_gain(w, t.direction));
    }
    return out;
}

// alpha of a unit-norm CM design: the relaxed max-weight scaled until the
// tightest target is met exactly.
double cm_alpha(int n, double min_ratio) {
    if (std::isinf(min_ratio)) {
        return 0.0;
    }
    if (!(min_ratio > 0.0)) {
        return kInf;
    }
    return 1.0 / std::sqrt(n * min_ratio);
}

DesignResult finish_cm(Awv awv, std::span<const BeamTarget> targets, int iterations) {
    auto achieved = achieved_gains_of(awv, targets);
    const double ratio = min_target_ratio(achieved, targets);
    const double alpha = cm_alpha(awv.size(), ratio);
    return DesignResult{std::move(awv), std::move(achieved), alpha, iterations, ratio,
                        ratio < kShortfallRatio, {}};
}

// Contiguous partition sizes proportional to the given weights, each >= 1,
// summing to n (largest-remainder rounding).
std::vector<int> proportional_sizes(int n, const std::vector<double>& weights) {
    const std::size_t k = weights.size();
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<double> share(k);
    for (std::size_t m = 0; m < k; ++m) {
        share[m] = total > 0.0 ? n * weights[m] / total : static_cast<double>(n) / k;
    }
    std::vector<int> sizes(k);
    for (std::size_t m = 0; m < k; ++m) {
        sizes[m] = std::max(1, static_cast<int>(std::floor(share[m])));
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    // Largest fractional remainder first, lower index on ties.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return share[a] - std::floor(share[a]) > share[b] - std::floor(share[b]);
    });
    int assigned = std::accumulate(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; assigned < n; i = (i + 1) % k) {
        ++sizes[order[i]];
        ++assigned;
    }
    while (assigned > n) {
        auto it = std::max_element(sizes.begin(), sizes.end());
        --*it;
        --assigned;
    }
    return sizes;
}

// Per-sub-array phase search shared by the wide-beam and multi-beam builders.
// score(theta) is maximized; theta_0 stays 0. Small problems are searched
// exhaustively in lexicographic order, larger ones by cyclic coordinate passes.
template <typename Score>
std::vector<int> search_theta(std::size_t k, std::size_t exhaustive_free, Score&& score, int& sweeps) {
    std::vector<int> idx(k, 0);
    std::vector<double> theta(k, 0.0);
    auto to_theta = [&](const std::vector<int>& ix) {
        for (std::size_t m = 0; m < k; ++m) {
            theta[m] = 2.0 * kPi * ix[m] / kThetaLevels;
        }
        return theta;
    };
    sweeps = 1;
    if (k <= 1) {
        return idx;
    }
    if (k - 1 <= exhaustive_free) {
        std::vector<int> best = idx;
        double best_score = score(to_theta(idx));
        std::vector<int> cur(k, 0);
        while (true) {
            // odometer over cur[1..k-1], last index fastest
            std::size_t pos = k - 1;
            while (pos >= 1 && cur[pos] == kThetaLevels - 1) {
                cur[pos] = 0;
                --pos;
            }
            if (pos == 0) {
                break;
            }
            ++cur[pos];
            const double s = score(to_theta(cur));
            if (s > best_score) {
                best_score = s;
                best = cur;
            }
        }
        return best;
    }
    double best_score = score(to_theta(idx));
    constexpr int kMaxSweeps = 50;
    for (sweeps = 1; sweeps <= kMaxSweeps; ++sweeps) {
        bool improved = false;
        for (std::size_t m = 1; m < k; ++m) {
            std::vector<int> trial = idx;
            for (int q = 0; q < kThetaLevels; ++q) {
                trial[m] = q;
                const double s = score(to_theta(trial));
                if (s > best_score) {
                    best_score = s;
                    idx = trial;
                    improved = true;
                }
            }
        }
        if (!improved) {
            break;
        }
    }
    return idx;
}

// ---- wide beam -------------------------------------------------------------

struct GridResponse {
    int n;
    std::vector<double> phis;
    Eigen::MatrixXcd a;  // n x grid steering matrix
};

GridResponse make_grid(int n, double lo, double hi, int points) {
    GridResponse g{n, std::vector<double>(static_cast<std::size_t>(points)), Eigen::MatrixXcd(n, points)};
    for (int k = 0; k < points; ++k) {
        const double phi = lo + (hi - lo) * k / (points - 1);
        g.phis[static_cast<std::size_t>(k)] = phi;
        for (int e = 0; e < n; ++e) {
            g.a(e, k) = std::polar(1.0, kPi * e * phi);
        }
    }
    return g;
}

Eigen::VectorXd grid_gains(const GridResponse& g, const std::vector<double>& phases) {
    cvec wc(g.n);  // conj(w)
    const double mag = 1.0 / std::sqrt(static_cast<double>(g.n));
    for (int e = 0; e < g.n; ++e) {
        wc[e] = std::polar(mag, -phases[static_cast<std::size_t>(e)]);
    }
    const cvec s = g.a.transpose() * wc;
    return s.cwiseAbs2();
}

// In-beam gains are kept inside [kFloor, kCeiling] times the ideal gain by
// maximizing min(u, kFloor + kCeiling - u) over normalized gains u.
constexpr double kFloor = 0.5;
constexpr double kCeiling = 2.0;

double band_score(const Eigen::VectorXd& normalized) {
    return std::min(normalized.minCoeff(), kFloor + kCeiling - normalized.maxCoeff());
}

// Gradient ascent on a log-sum-exp soft minimum of the band score over
// per-element phases, with increasing sharpness.
std::vector<double> refine_band(const GridResponse& g, std::vector<double> phases, double scale) {
    const int n = g.n;
    const auto points = static_cast<Eigen::Index>(g.phis.size());
    const double mag = 1.0 / std::sqrt(static_cast<double>(n));

    auto soft_min = [&](const std::vector<double>& ph, cvec* s_out, Eigen::VectorXd* p_out, double mu) {
        cvec wc(n);
        for (int e = 0; e < n; ++e) {
            wc[e] = std::polar(mag, -ph[static_cast<std::size_t>(e)]);
        }
        cvec s = g.a.transpose() * wc;
        const Eigen::VectorXd gn = s.cwiseAbs2() / scale;
        const Eigen::VectorXd upper = (kFloor + kCeiling) - gn.array();
        const double m = std::min(gn.minCoeff(), upper.minCoeff());
        const Eigen::VectorXd e_low = (-mu * (gn.array() - m)).exp();
        const Eigen::VectorXd e_high = (-mu * (upper.array() - m)).exp();
        const double z = e_low.sum() + e_high.sum();
        if (s_out) {
            *s_out = std::move(s);
        }
        if (p_out) {
            // net weight on d gn: the upper terms enter with a minus sign
            *p_out = (e_low - e_high) / z;
        }
        return m - std::log(z) / mu;
    };

    for (const double mu : {4.0, 16.0, 64.0, 256.0}) {
        double step = 0.1;
        cvec s;
        Eigen::VectorXd p;
        double f = soft_min(phases, &s, &p, mu);
        for (int it = 0; it < 750; ++it) {
            // d|s_k|^2 / d theta_e = 2 Im(conj(s_k) conj(w_e) a_e(phi_k))
            std::vector<double> grad(static_cast<std::size_t>(n), 0.0);
            double gnorm2 = 0.0;
            for (int e = 0; e < n; ++e) {
                const cplx wc = std::polar(mag, -phases[static_cast<std::size_t>(e)]);
                cplx acc{0.0, 0.0};
                for (Eigen::Index k = 0; k < points; ++k) {
                    acc += p[k] * std::conj(s[k]) * g.a(e, k);
                }
                const double d = 2.0 * std::imag(acc * wc) / scale;
                grad[static_cast<std::size_t>(e)] = d;
                gnorm2 += d * d;
            }
            if (gnorm2 < 1e-24) {
                break;
            }
            bool moved = false;
            while (step > 1e-12) {
                std::vector<double> trial = phases;
                for (int e = 0; e < n; ++e) {
                    trial[static_cast<std::size_t>(e)] += step * grad[static_cast<std::size_t>(e)];
                }
                cvec s2;
                Eigen::VectorXd p2;
                const double f2 = soft_min(trial, &s2, &p2, mu);
                if (f2 >= f + 1e-4 * step * gnorm2) {
                    phases = std::move(trial);
                    s = std::move(s2);
                    p = std::move(p2);
                    f = f2;
                    step *= 1.5;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) {
                break;
            }
        }
    }
    return phases;
}

// ---- relaxed multi-beam program ----------------------------------------------

struct RelaxedSolution {
    double alpha;
    cvec w;
};

// Projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& y) {
    const auto k = y.size();
    std::vector<double> u(y.data(), y.data() + k);
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0;
    double tau = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
        css += u[static_cast<std::size_t>(j)];
        const double t = (css - 1.0) / static_cast<double>(j + 1);
        if (u[static_cast<std::size_t>(j)] - t > 0.0) {
            tau = t;
        }
    }
    return (y.array() - tau).max(0.0).matrix();
}

// Solves  min alpha  s.t. |w_n| <= alpha,  Re(c_i^H w) >= b_i  (b_i > 0)
// through its dual  max b^T lambda  s.t. sum_n |(C lambda)_n| <= 1, lambda >= 0.
// With x_i = b_i * mu_i on the simplex this is  min_x ||D x||_1,  D = C diag(1/b),
// and alpha = 1 / min ||D x||_1. The primal optimum is alpha * sign(D x*), which
// gives a feasible point and a duality-gap certificate at every stage.
RelaxedSolution solve_relaxed(const Eigen::MatrixXcd& c, const Eigen::VectorXd& b, double gap_tol) {
    const Eigen::Index n = c.rows();
    const Eigen::Index k = c.cols();
    Eigen::MatrixXcd d = c;
    for (Eigen::Index i = 0; i < k; ++i) {
        d.col(i) /= b[i];
    }

    auto primal_from = [&](const Eigen::VectorXd& x, double& alpha_p) {
        const cvec v = d * x.cast<cplx>();
        cvec u(n);
        for (Eigen::Index e = 0; e < n; ++e) {
            const double m = std::abs(v[e]);
            u[e] = m > 0.0 ? v[e] / m : cplx{1.0, 0.0};
        }
        double scale = 0.0;
        for (Eigen::Index i = 0; i < k; ++i) {
            const double r = std::real(c.col(i).dot(u));  // Re(c_i^H u)
            scale = r > 0.0 ? std::max(scale, b[i] / r) : kInf;
        }
        alpha_p = scale;
        return cvec(scale * u);
    };
    auto l1 = [&](const Eigen::VectorXd& x) { return (d * x.cast<cplx>()).cwiseAbs().sum(); };

    Eigen::VectorXd x = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
    double best_alpha = kInf;
    cvec best_w;
    {
        double a;
        best_w = primal_from(x, a);
        best_alpha = a;
    }
    if (k == 1) {
        return {best_alpha, best_w};
    }

    double best_dual = 1.0 / l1(x);
    const double vscale = l1(x) / static_cast<double>(n);
    for (double eps = 0.1 * vscale; eps > 1e-13 * vscale; eps *= 0.1) {
        auto smooth = [&](const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
            const cvec v = d * z.cast<cplx>();
            double f = 0.0;
            cvec weight(n);
            for (Eigen::Index e = 0; e < n; ++e) {
                const double r = std::sqrt(std::norm(v[e]) + eps * eps);
                f += r;
                weight[e] = v[e] / r;
            }
            if (grad) {
                // d f / d x_i = sum_n Re(conj(v_n) d_{n,i}) / r_n
                *grad = (d.adjoint() * weight).real();
            }
            return f;
        };
        // FISTA with backtracking and gradient-based restart.
        Eigen::VectorXd y = x;
        Eigen::VectorXd x_prev = x;
        double t = 1.0;
        double lip = 1.0;
        for (int it = 0; it < 2000; ++it) {
            Eigen::VectorXd grad;
            const double fy = smooth(y, &grad);
            Eigen::VectorXd x_new;
            while (true) {
                x_new = project_simplex(y - grad / lip);
                const Eigen::VectorXd diff = x_new - y;
                if (smooth(x_new, nullptr) <= fy + grad.dot(diff) + 0.5 * lip * diff.squaredNorm() + 1e-15) {
                    break;
                }
                lip *= 2.0;
            }
            const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            if ((y - x_new).dot(x_new - x_prev) > 0.0) {
                t = 1.0;  // restart momentum
                y = x_new;
            } else {
                y = x_new + ((t - 1.0) / t_new) * (x_new - x_prev);
                t = t_new;
            }
            const double moved = (x_new - x_prev).norm();
            x_prev = x;
            x = x_new;
            lip *= 0.9;
            if (moved < 1e-15) {
                break;
            }
        }
        double alpha_p;
        cvec w = primal_from(x, alpha_p);
        if (alpha_p < best_alpha) {
            best_alpha = alpha_p;
            best_w = std::move(w);
        }
        best_dual = std::max(best_dual, 1.0 / l1(x));
        if (best_alpha - best_dual <= gap_tol * best_dual) {
            break;
        }
    }
    return {best_alpha, best_w};
}

struct AlternatingRun {
    cvec w;
    double alpha;
    int iterations;
    std::vector<double> history;
};

AlternatingRun run_alternating(const ArrayGeometry& geom, const std::vector<BeamTarget>& active,
                               std::vector<double> psi, const CmOptimizeOptions& opt) {
    const auto k = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXcd steer(geom.n(), k);
    Eigen::VectorXd b(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        steer.col(i) = steering_vector(geom, active[static_cast<std::size_t>(i)].direction);
        b[i] = std::sqrt(active[static_cast<std::size_t>(i)].target_gain);
    }
    AlternatingRun run{cvec::Zero(geom.n()), kInf, 0, {}};
    for (int it = 1; it <= std::max(1, opt.max_iter); ++it) {
        Eigen::MatrixXcd c = steer;
        for (Eigen::Index i = 0; i < k; ++i) {
            c.col(i) *= std::polar(1.0, psi[static_cast<std::size_t>(i)]);
        }
        RelaxedSolution sol = solve_relaxed(c, b, 1e-9);
        const double previous = run.alpha;
        // Keep the incumbent unless the new solve improves on it.
        if (sol.alpha < run.alpha) {
            run.alpha = sol.alpha;
            run.w = std::move(sol.w);
        }
        run.iterations = it;
        run.history.push_back(run.alpha);
        for (Eigen::Index i = 0; i < k; ++i) {
            psi[static_cast<std::size_t>(i)] = std::arg(steer.col(i).dot(run.w));  // arg(a_i^H w)
        }
        if (std::isfinite(previous) && previous - run.alpha < opt.tol * run.alpha) {
            break;
        }
    }
    return run;
}

}  // namespace

double min_target_ratio(std::span<const double> achieved, std::span<const BeamTarget> targets) {
    double ratio = kInf;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i].target_gain > 0.0) {
            ratio = std::min(ratio, achieved[i] / targets[i].target_gain);
        }
    }
    return ratio;
}

Awv steer_single(const ArrayGeometry& geom, Direction d) {
    return Awv(steering_vector(geom, d) / std::sqrt(static_cast<double>(geom.n())), true);
}

Awv wide_beam(const ArrayGeometry& geom, Direction center, double width) {
    const int n = geom.n();
    constexpr double kSlack = 1e-9;
    if (!(width >= geom.min_width() - kSlack && width <= 2.0 + kSlack)) {
        throw std::invalid_argument("wide beam width must lie in [2/N, 2], got " + std::to_string(width));
    }
    const int k = std::clamp(static_cast<int>(std::ceil(width * n / 2.0 - kSlack)), 1, n);
    if (k == 1) {
        return steer_single(geom, center);
    }
    const double lo = center.phi() - width / 2;
    const double hi = center.phi() + width / 2;

    const auto sizes = proportional_sizes(n, std::vector<double>(static_cast<std::size_t>(k), 1.0));
    std::vector<double> base(static_cast<std::size_t>(n));
    std::vector<int> owner(static_cast<std::size_t>(n));
    for (int m = 0, e = 0; m < k; ++m) {
        const double dir = lo + (m + 0.5) * width / k;
        for (int j = 0; j < sizes[static_cast<std::size_t>(m)]; ++j, ++e) {
            base[static_cast<std::size_t>(e)] = kPi * e * dir;
            owner[static_cast<std::size_t>(e)] = m;
        }
    }

    const GridResponse grid = make_grid(n, lo, hi, 8 * n + 1);
    // response(m, j) = sub-array m's contribution to w^H a(phi_j) at theta_m = 0
    const auto points = static_cast<Eigen::Index>(grid.phis.size());
    Eigen::MatrixXcd response = Eigen::MatrixXcd::Zero(k, points);
    const double mag = 1.0 / std::sqrt(static_cast<double>(n));
    for (int e = 0; e < n; ++e) {
        const cplx wc = std::polar(mag, -base[static_cast<std::size_t>(e)]);
        response.row(owner[static_cast<std::size_t>(e)]) += wc * grid.a.row(e);
    }
    auto phases_for = [&](const std::vector<double>& theta) {
        std::vector<double> ph(base);
        for (int e = 0; e < n; ++e) {
            ph[static_cast<std::size_t>(e)] += theta[static_cast<std::size_t>(owner[static_cast<std::size_t>(e)])];
        }
        return ph;
    };
    auto score = [&](const std::vector<double>& theta) {
        Eigen::RowVectorXcd rot(k);
        for (int m = 0; m < k; ++m) {
            rot[m] = std::polar(1.0, -theta[static_cast<std::size_t>(m)]);
        }
        return (rot * response).cwiseAbs2().minCoeff();
    };
    int sweeps = 0;
    const auto best_idx = search_theta(static_cast<std::size_t>(k), 2, score, sweeps);
    std::vector<double> theta(static_cast<std::size_t>(k));
    for (int m = 0; m < k; ++m) {
        theta[static_cast<std::size_t>(m)] = 2.0 * kPi * best_idx[static_cast<std::size_t>(m)] / kThetaLevels;
    }
    // Candidates: the sub-array design and a linear chirp sweeping the
    // interval, each refined; the best band score wins.
    std::vector<double> chirp(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) {
        chirp[static_cast<std::size_t>(e)] = kPi * (lo * e + width * e * e / (2.0 * n));
    }
    const double ideal = 2.0 / width;
    std::vector<double> best = phases_for(theta);
    double best_min = band_score(grid_gains(grid, best) / ideal);
    for (const auto& start : {best, chirp}) {
        auto refined = refine_band(grid, start, ideal);
        const double m = band_score(grid_gains(grid, refined) / ideal);
        if (m > best_min) {
            best_min = m;
            best = std::move(refined);
        }
    }
    return Awv::from_phases(best);
}

DesignResult subarray_multibeam(const ArrayGeometry& geom, std::span<const BeamTarget> targets,
                                std::optional<std::vector<int>> sizes) {
    validate_targets(geom, targets);
    const int n = geom.n();
    const std::size_t k = targets.size();
    if (sizes) {
        if (sizes->size() != k) {
            throw std::invalid_argument("need one sub-array size per target");
        }
        if (std::any_of(sizes->begin(), sizes->end(), [](int s) { return s < 1; }) ||
            std::accumulate(sizes->begin(), sizes->end(), 0) != n) {
            throw std::invalid_argument("sub-array sizes must be positive and sum to N");
        }
    } else {
        std::vector<double> weights;
        for (const auto& t : targets) {
            weights.push_back(std::sqrt(t.target_gain));
        }
        sizes = proportional_sizes(n, weights);
    }

    const double mag = 1.0 / std::sqrt(static_cast<double>(n));
    cvec base(n);
    std::vector<int> owner(static_cast<std::size_t>(n));
    for (std::size_t m = 0, e = 0; m < k; ++m) {
        for (int j = 0; j < (*sizes)[m]; ++j, ++e) {
            base[static_cast<Eigen::Index>(e)] = std::polar(mag, kPi * static_cast<double>(e) * targets[m].direction.phi());
            owner[e] = static_cast<int>(m);
        }
    }
    // partial[m][i] = sum over sub-array m of conj(w_n) a_i[n]
    Eigen::MatrixXcd partial = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        const cvec a = steering_vector(geom, targets[i].direction);
        for (int e = 0; e < n; ++e) {
            partial(owner[static_cast<std::size_t>(e)], static_cast<Eigen::Index>(i)) += std::conj(base[e]) * a[e];
        }
    }
    auto score = [&](const std::vector<double>& theta) {
        double ratio = kInf;
        for (std::size_t i = 0; i < k; ++i) {
            if (!(targets[i].target_gain > 0.0)) {
                continue;
            }
            cplx s{0.0, 0.0};
            for (std::size_t m = 0; m < k; ++m) {
                s += std::polar(1.0, -theta[m]) * partial(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(i));
            }
            ratio = std::min(ratio, std::norm(s) / targets[i].target_gain);
        }
        return ratio;
    };
    int sweeps = 0;
    const auto idx = search_theta(k, 3, score, sweeps);

    cvec w = base;
    for (int e = 0; e < n; ++e) {
        w[e] *= std::polar(1.0, 2.0 * kPi * idx[static_cast<std::size_t>(owner[static_cast<std::size_t>(e)])] / kThetaLevels);
    }
    return finish_cm(Awv(std::move(w), true), targets, sweeps);
}

DesignResult cm_optimize_multibeam(const ArrayGeometry& geom, std::span<const BeamTarget> targets,
                                   const CmOptimizeOptions& options) {
    validate_targets(geom, targets);
    double budget = 0.0;
    for (const auto& t : targets) {
        budget += t.target_gain * geom.min_width();
    }
    if (budget > 2.0 * (1.0 + options.tol)) {
        throw InfeasibleError("beam targets exceed the gain-width budget: sum G_i * 2/N = " +
                              std::to_string(budget) + " > 2");
    }
    std::vector<BeamTarget> active;
    for (const auto& t : targets) {
        if (t.target_gain > 0.0) {
            active.push_back(t);
        }
    }
    if (active.empty()) {
        auto result = finish_cm(Awv::from_phases(std::vector<double>(static_cast<std::size_t>(geom.n()), 0.0)),
                                targets, 1);
        result.alpha_history = {0.0};
        return result;
    }

    auto evaluate = [&](const AlternatingRun& run) {
        DesignResult r = finish_cm(Awv::project_cm(run.w), targets, run.iterations);
        r.alpha = run.alpha;
        r.alpha_history = run.history;
        return r;
    };

    DesignResult best = evaluate(run_alternating(geom, active, std::vector<double>(active.size(), 0.0), options));
    // The alternating scheme only finds a local fixed point in psi, so extra
    // random psi starts run on every call and the best projected design wins.
    {
        std::mt19937_64 rng(options.restart_seed);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
        for (int r = 0; r < options.restarts; ++r) {
            std::vector<double> psi(active.size());
            for (auto& p : psi) {
                p = phase(rng);
            }
            DesignResult trial = evaluate(run_alternating(geom, active, std::move(psi), options));
            if (trial.min_ratio > best.min_ratio * (1.0 + 1e-9)) {  // ignore round-off ties
                best = std::move(trial);
            }
        }
    }
    return best;
}

DesignResult exhaustive_cm_oracle(const ArrayGeometry& geom, std::span<const BeamTarget> targets,
                                  int phase_levels) {
    validate_targets(geom, targets);
    const int n = geom.n();
    if (n > 10) {
        throw std::invalid_argument("exhaustive CM oracle supports N <= 10");
    }
    if (phase_levels < 1) {
        throw std::invalid_argument("phase_levels must be positive");
    }
    const auto q = static_cast<std::uint64_t>(phase_levels);
    std::uint64_t candidates = 1;
    for (int e = 1; e < n; ++e) {
        candidates *= q;
        if (candidates > kMaxOracleCandidates) {
            throw std::invalid_argument("exhaustive CM oracle search space exceeds " +
                                        std::to_string(kMaxOracleCandidates) + " candidates");
        }
    }

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i].target_gain > 0.0) {
            active.push_back(i);
        }
    }
    std::vector<int> best_idx(static_cast<std::size_t>(n), 0);
    if (!active.empty() && n > 1) {
        const std::size_t k = active.size();
        const std::size_t levels = static_cast<std::size_t>(phase_levels);
        const double mag = 1.0 / std::sqrt(static_cast<double>(n));
        // term[(i * n + e) * levels + l] = a_i[e] * exp(-j 2 pi l / Q) / sqrt(N)
        std::vector<double> term_re(k * static_cast<std::size_t>(n) * levels);
        std::vector<double> term_im(term_re.size());
        std::vector<double> inv_gain(k);
        for (std::size_t i = 0; i < k; ++i) {
            const auto& t = targets[active[i]];
            inv_gain[i] = 1.0 / t.target_gain;
            for (int e = 0; e < n; ++e) {
                for (std::size_t l = 0; l < levels; ++l) {
                    const cplx v = std::polar(mag, kPi * e * t.direction.phi() - 2.0 * kPi * static_cast<double>(l) / phase_levels);
                    const std::size_t at = (i * static_cast<std::size_t>(n) + static_cast<std::size_t>(e)) * levels + l;
                    term_re[at] = v.real();
                    term_im[at] = v.imag();
                }
            }
        }
        auto term_at = [&](std::size_t i, int e) { return (i * static_cast<std::size_t>(n) + static_cast<std::size_t>(e)) * levels; };

        // Partial sums per depth: sums[depth * k + i].
        std::vector<double> sum_re(static_cast<std::size_t>(n) * k, 0.0);
        std::vector<double> sum_im(sum_re.size(), 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            sum_re[i] = term_re[term_at(i, 0)];
            sum_im[i] = term_im[term_at(i, 0)];
        }
        std::vector<int> cur(static_cast<std::size_t>(n), 0);
        std::vector<double> leaf(levels);
        double best = -1.0;
        const int last = n - 1;

        auto visit_leaves = [&](int depth_base) {
            // depth_base = index of the last fixed element; element `last` varies.
            std::fill(leaf.begin(), leaf.end(), kInf);
            for (std::size_t i = 0; i < k; ++i) {
                const double sr = sum_re[static_cast<std::size_t>(depth_base) * k + i];
                const double si = sum_im[static_cast<std::size_t>(depth_base) * k + i];
                const double* tr = &term_re[term_at(i, last)];
                const double* ti = &term_im[term_at(i, last)];
                const double ig = inv_gain[i];
                for (std::size_t l = 0; l < levels; ++l) {
                    const double zr = sr + tr[l];
                    const double zi = si + ti[l];
                    leaf[l] = std::min(leaf[l], (zr * zr + zi * zi) * ig);
                }
            }
            for (std::size_t l = 0; l < levels; ++l) {
                if (leaf[l] > best) {
                    best = leaf[l];
                    cur[static_cast<std::size_t>(last)] = static_cast<int>(l);
                    best_idx = cur;
                }
            }
        };

        // Depth-first over elements 1..n-2, leaves vectorized over element n-1.
        auto recurse = [&](auto&& self, int e) -> void {
            if (e == last) {
                visit_leaves(e - 1);
                return;
            }
            for (std::size_t l = 0; l < levels; ++l) {
                cur[static_cast<std::size_t>(e)] = static_cast<int>(l);
                for (std::size_t i = 0; i < k; ++i) {
                    sum_re[static_cast<std::size_t>(e) * k + i] = sum_re[static_cast<std::size_t>(e - 1) * k + i] + term_re[term_at(i, e) + l];
                    sum_im[static_cast<std::size_t>(e) * k + i] = sum_im[static_cast<std::size_t>(e - 1) * k + i] + term_im[term_at(i, e) + l];
                }
                self(self, e + 1);
            }
        };
        recurse(recurse, 1);
    }

    std::vector<double> phases(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) {
        phases[static_cast<std::size_t>(e)] = 2.0 * kPi * best_idx[static_cast<std::size_t>(e)] / phase_levels;
    }
    return finish_cm(Awv::from_phases(phases), targets, 1);
}

BeamDesigner cm_optimize_designer(CmOptimizeOptions options) {
    return [options](const ArrayGeometry& geom, std::span<const BeamTarget> targets) {
        return cm_optimize_multibeam(geom, targets, options);
    };
}

BeamDesigner subarray_designer() {
    return [](const ArrayGeometry& geom, std::span<const BeamTarget> targets) {
        return subarray_multibeam(geom, targets);
    };
}

}  // namespace mmnoma
