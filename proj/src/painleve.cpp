#include "rairy/painleve.hpp"
#include "rairy/airy.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace rairy {

namespace {

inline double rhs_g(double a, double g) { return a * g + 2.0 * g * g * g; }

struct State { double g, gp; };

inline State rk4_step(double a, State y, double h) {
    auto f = [](double a_, State y_) { return State{y_.gp, rhs_g(a_, y_.g)}; };
    State k1 = f(a, y);
    State k2 = f(a + 0.5 * h, {y.g + 0.5 * h * k1.g, y.gp + 0.5 * h * k1.gp});
    State k3 = f(a + 0.5 * h, {y.g + 0.5 * h * k2.g, y.gp + 0.5 * h * k2.gp});
    State k4 = f(a + h, {y.g + h * k3.g, y.gp + h * k3.gp});
    return {y.g + h / 6.0 * (k1.g + 2 * k2.g + 2 * k3.g + k4.g),
            y.gp + h / 6.0 * (k1.gp + 2 * k2.gp + 2 * k3.gp + k4.gp)};
}

double left_asymptote(double a) {
    double a3 = a * a * a;
    return std::sqrt(-a / 2.0) * (1.0 + 1.0 / (8.0 * a3) - 73.0 / (128.0 * a3 * a3));
}

// integrate leftward; classify the solution family relative to the
// Hastings-McLeod separatrix: +1 blow-up upward / overshoot, -1 undershoot
int classify(double amax, double amin, double g0, double s, int substeps_total,
             double* g_end = nullptr) {
    double h = (amin - amax) / substeps_total;  // negative
    State y{g0, s};
    double a = amax;
    double prev = g0;
    for (int i = 0; i < substeps_total; ++i) {
        y = rk4_step(a, y, h);
        a += h;
        if (!std::isfinite(y.g)) return prev > 0 ? +1 : -1;
        if (std::abs(y.g) > 10.0) return y.g > 0 ? +1 : -1;
        prev = y.g;
    }
    if (g_end) *g_end = y.g;
    return y.g > left_asymptote(amin) ? +1 : -1;
}

} // namespace

double Painleve2Solution::eval_g(double a) const {
    if (a <= amin) a = amin;
    if (a >= amax) a = amax;
    size_t n = alpha.size();
    size_t i = std::min((size_t)((a - amin) / h), n - 2);
    double a0 = alpha[i], a1 = alpha[i + 1];
    double t = (a - a0) / h;
    // quintic Hermite with curvature from the ODE
    double g0 = g[i], g1 = g[i + 1], d0 = gp[i] * h, d1 = gp[i + 1] * h;
    double c0 = rhs_g(a0, g0) * h * h, c1 = rhs_g(a1, g1) * h * h;
    double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    double H3 = 0.5 * t3 - t4 + 0.5 * t5;
    double H4 = -4 * t3 + 7 * t4 - 3 * t5;
    double H5 = 10 * t3 - 15 * t4 + 6 * t5;
    return g0 * H0 + d0 * H1 + c0 * H2 + c1 * H3 + d1 * H4 + g1 * H5;
}

double Painleve2Solution::eval_gp(double a) const {
    if (a <= amin) a = amin;
    if (a >= amax) a = amax;
    size_t n = alpha.size();
    size_t i = std::min((size_t)((a - amin) / h), n - 2);
    double a0 = alpha[i], a1 = alpha[i + 1];
    double t = (a - a0) / h;
    double g0 = g[i], g1 = g[i + 1], d0 = gp[i] * h, d1 = gp[i + 1] * h;
    double c0 = rhs_g(a0, g0) * h * h, c1 = rhs_g(a1, g1) * h * h;
    double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    double dH0 = -30 * t2 + 60 * t3 - 30 * t4;
    double dH1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    double dH2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
    double dH3 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
    double dH4 = -12 * t2 + 28 * t3 - 15 * t4;
    double dH5 = 30 * t2 - 60 * t3 + 30 * t4;
    return (g0 * dH0 + d0 * dH1 + c0 * dH2 + c1 * dH3 + d1 * dH4 + g1 * dH5) / h;
}

Painleve2Solution hastings_mcleod(double alpha_min, double alpha_max, int n_nodes) {
    if (alpha_max < 6.0) throw std::invalid_argument("hastings_mcleod: alpha_max must be >= 6");
    if (alpha_min < -12.0) throw std::invalid_argument("hastings_mcleod: alpha_min must be >= -12");
    if (n_nodes < 101) throw std::invalid_argument("hastings_mcleod: too few nodes");

    AiryPair seed = airy(alpha_max);

    int cells = n_nodes - 1;
    double cell = (alpha_max - alpha_min) / cells;
    int sub = std::max(1, (int)std::ceil(cell / 1e-4));
    auto steps_between = [&](double hi, double lo) {
        return std::max(1, (int)std::lround((hi - lo) / cell)) * sub;
    };

    auto tune_slope = [&](double a_from, double g_at, double s_guess) {
        int total = steps_between(a_from, alpha_min);
        int c0 = classify(a_from, alpha_min, g_at, s_guess, total);
        double slo = 0, shi = 0;
        double d = std::max(std::abs(s_guess), 1e-3) * 1e-12;
        bool found = false;
        for (int k = 0; k < 60 && !found; ++k) {
            double sp = s_guess + d, sm = s_guess - d;
            if (classify(a_from, alpha_min, g_at, sp, total) != c0) {
                slo = std::min(s_guess, sp); shi = std::max(s_guess, sp); found = true;
            } else if (classify(a_from, alpha_min, g_at, sm, total) != c0) {
                slo = std::min(s_guess, sm); shi = std::max(s_guess, sm); found = true;
            }
            d *= 2.0;
        }
        if (!found) throw std::runtime_error("hastings_mcleod: slope bracket not found");
        int clo = classify(a_from, alpha_min, g_at, slo, total);
        for (int it = 0; it < 120; ++it) {
            double mid = 0.5 * (slo + shi);
            if (mid == slo || mid == shi) break;
            if (classify(a_from, alpha_min, g_at, mid, total) == clo) slo = mid;
            else shi = mid;
        }
        return 0.5 * (slo + shi);
    };

    // staged shooting: re-tune the slope at successively deeper anchors to
    // beat the slope-granularity amplification of the unstable direction
    std::vector<double> anchor_pts = {alpha_max};
    if (alpha_min < -1.0) anchor_pts.push_back(0.0);
    if (alpha_min < -6.0) anchor_pts.push_back(-5.0);
    for (double& ap : anchor_pts)  // snap to grid
        ap = alpha_min + cell * std::lround((ap - alpha_min) / cell);

    struct Anchor { double a, g, s; };
    std::vector<Anchor> segs;
    double cur_a = anchor_pts[0], cur_g = seed.A, cur_s = seed.Ap;
    for (size_t k = 0; k < anchor_pts.size(); ++k) {
        cur_s = tune_slope(cur_a, cur_g, cur_s);
        segs.push_back({cur_a, cur_g, cur_s});
        if (k + 1 < anchor_pts.size()) {
            // advance to the next anchor along the tuned segment
            double next_a = anchor_pts[k + 1];
            State y{cur_g, cur_s};
            int nst = steps_between(cur_a, next_a);
            double hs = (next_a - cur_a) / nst;
            double a = cur_a;
            for (int i = 0; i < nst; ++i) { y = rk4_step(a, y, hs); a += hs; }
            cur_a = next_a;
            cur_g = y.g;
            cur_s = y.gp;
        }
    }

    // final pass, recording grid values segment by segment
    Painleve2Solution sol;
    sol.amin = alpha_min;
    sol.amax = alpha_max;
    sol.h = cell;
    sol.alpha.resize(n_nodes);
    sol.g.resize(n_nodes);
    sol.gp.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) sol.alpha[i] = alpha_min + i * cell;
    size_t seg = 0;
    State y{segs[0].g, segs[0].s};
    sol.g[n_nodes - 1] = y.g;
    sol.gp[n_nodes - 1] = y.gp;
    for (int c = cells - 1; c >= 0; --c) {
        double a_hi = sol.alpha[c + 1];
        if (seg + 1 < segs.size() && std::abs(a_hi - segs[seg + 1].a) < 0.25 * cell) {
            ++seg;
            y = {segs[seg].g, segs[seg].s};
        }
        double hsub = -cell / sub;
        double a = a_hi;
        for (int si = 0; si < sub; ++si) {
            y = rk4_step(a, y, hsub);
            a += hsub;
        }
        sol.g[c] = y.g;
        sol.gp[c] = y.gp;
        if (!std::isfinite(y.g) || std::abs(y.g) > 10.0)
            throw std::runtime_error("hastings_mcleod: matched solution blew up");
    }
    sol.boundary_miss = std::abs(sol.g[0] - left_asymptote(alpha_min));

    // Newton collocation polish: the shooting pass leaves slope kinks at the
    // anchors and amplified rounding noise near the left end.  Re-solve the
    // ODE on the grid with an O(h^6) 7-point stencil, pinning three nodes at
    // each end (left asymptote / decaying Airy solution), starting from the
    // shot values.
    {
        int n = n_nodes;
        std::vector<double> pin_lo(3), pin_hi(3);
        for (int i = 0; i < 3; ++i) {
            pin_lo[i] = left_asymptote(sol.alpha[i]);
            pin_hi[i] = airy_A(sol.alpha[n - 3 + i]);
        }
        const double w[7] = {2, -27, 270, -490, 270, -27, 2};
        double ih2 = 1.0 / (180.0 * cell * cell);
        for (int newton = 0; newton < 8; ++newton) {
            Eigen::SparseMatrix<double> J(n, n);
            Eigen::VectorXd rhs(n);
            std::vector<Eigen::Triplet<double>> trip;
            trip.reserve(7 * n);
            for (int i = 0; i < 3; ++i) {
                trip.emplace_back(i, i, 1.0);
                rhs[i] = pin_lo[i] - sol.g[i];
                trip.emplace_back(n - 3 + i, n - 3 + i, 1.0);
                rhs[n - 3 + i] = pin_hi[i] - sol.g[n - 3 + i];
            }
            for (int i = 3; i < n - 3; ++i) {
                double d2 = 0.0;
                for (int j = 0; j < 7; ++j) d2 += w[j] * sol.g[i - 3 + j];
                d2 *= ih2;
                rhs[i] = -(d2 - rhs_g(sol.alpha[i], sol.g[i]));
                for (int j = 0; j < 7; ++j) {
                    double v = w[j] * ih2;
                    if (j == 3) v -= sol.alpha[i] + 6.0 * sol.g[i] * sol.g[i];
                    trip.emplace_back(i, i - 3 + j, v);
                }
            }
            J.setFromTriplets(trip.begin(), trip.end());
            Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
            lu.compute(J);
            if (lu.info() != Eigen::Success)
                throw std::runtime_error("hastings_mcleod: collocation factorization failed");
            Eigen::VectorXd dg = lu.solve(rhs);
            double step = 0.0;
            for (int i = 0; i < n; ++i) {
                sol.g[i] += dg[i];
                step = std::max(step, std::abs(dg[i]));
            }
            if (step < 1e-13) break;
        }
        // refresh the slope from the polished values (O(h^6) central stencil;
        // keep the shot slopes on the three edge nodes at each side)
        for (int i = 3; i < n - 3; ++i) {
            sol.gp[i] = (-sol.g[i - 3] + 9.0 * sol.g[i - 2] - 45.0 * sol.g[i - 1]
                         + 45.0 * sol.g[i + 1] - 9.0 * sol.g[i + 2] + sol.g[i + 3])
                        / (60.0 * cell);
        }
    }

    // ODE residual via 7-point second difference of the stored grid
    double worst = 0.0;
    for (int i = 3; i + 3 < n_nodes; ++i) {
        double d2 = (2.0 * sol.g[i - 3] - 27.0 * sol.g[i - 2] + 270.0 * sol.g[i - 1]
                     - 490.0 * sol.g[i] + 270.0 * sol.g[i + 1] - 27.0 * sol.g[i + 2]
                     + 2.0 * sol.g[i + 3]) / (180.0 * cell * cell);
        double res = std::abs(d2 - rhs_g(sol.alpha[i], sol.g[i]));
        if (res > worst) worst = res;
    }
    sol.residual_bound = worst;
    return sol;
}

} // namespace rairy
