#pragma once
#include "rairy/painleve.hpp"

#include <array>
#include <memory>
#include <vector>

namespace rairy {

// Q_0 = log of the GUE edge law; derivatives in closed form through (g, g', x)
// using g'' = x g + 2 g^3
struct Q0Derivatives {
    std::vector<double> x;
    std::array<std::vector<double>, 7> d;  // d[k][i] = Q_0^{(k)}(x_i), k = 0..6
    std::shared_ptr<const Painleve2Solution> sol;

    // pointwise closed-form evaluation, k = 0..8
    double eval(int k, double xx) const;
};

Q0Derivatives q0_derivatives(const std::vector<double>& grid,
                             std::shared_ptr<const Painleve2Solution> sol);

// F_5(x) = x^2 Q0' + 4x Q0 + Q0'^2 + 10 int_x^inf Q0 - 6 int_x^inf (u-x) Q0''(u)^2 du
double f5_value(const Q0Derivatives& q0, double x);
// k-th x-derivative, k = 0..4 (local in (g, g', x) for k >= 2)
double f5_derivative(const Q0Derivatives& q0, double x, int k);

// deep-time coefficients Q_1..Q_6 on the grid; c6 is the free constant in Q_6
struct ExpansionSet {
    int r = 0;
    double c6 = 0.0;
    std::vector<double> x;
    std::array<std::vector<double>, 7> Q;  // Q[1..6]
    std::vector<double> F5;
    std::shared_ptr<const Painleve2Solution> sol;

    double qn(int n, double xx) const;  // pointwise, n = 0..6
};

ExpansionSet expansion_coefficients(const Q0Derivatives& q0, int r, double c6 = 0.0);

// partial sum sum_{i<=order} Q_i(x)/tau^i, order <= 5
double asymptotic_q(const ExpansionSet& set, double tau, double x, int order);
// resummed form Q0((x + r/tau)(1 + r/(3 tau^3)) + r^2/(4 tau^4)) + r F5(x)/(5 tau^5)
double asymptotic_q_shifted(const ExpansionSet& set, double tau, double x);

// exact log det(I - K^{(r)}_tau) on (x, inf) for cross-checks
double exact_edge_q(int r, double tau, double x,
                    const Painleve2Solution& sol, double accuracy = 1e-10);

struct CompareTable {
    int r = 0;
    double x = 0.0;
    std::vector<double> taus;
    std::vector<std::vector<double>> errors;  // errors[o][i], order o = 0..max_order
    std::vector<double> exponents;            // least-squares decay exponent per order
};

CompareTable asymptotic_compare(int r, double x_probe, const std::vector<double>& taus,
                                int max_order);

struct EdgeMoments {
    double mu1 = 0.0, mu2 = 0.0, var = 0.0;
};

// moments of the edge density d/dx exp(Q(tau, x)) by integration by parts
EdgeMoments edge_moments_direct(int r, double tau, double dx = 0.05);

struct MomentExpansion {
    int r = 0;
    double tau = 0.0;
    double mu1 = 0.0, mu2 = 0.0, var = 0.0;
    double mean0 = 0.0, var0 = 0.0;  // Tracy-Widom base values
};

// deep-time moment corrections applied to the r = 0 base moments
MomentExpansion edge_moments_expansion(int r, double tau);

} // namespace rairy
