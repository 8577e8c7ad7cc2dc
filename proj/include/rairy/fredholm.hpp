#pragma once
#include "rairy/kernels.hpp"
#include "rairy/painleve.hpp"

#include <functional>
#include <vector>

namespace rairy {

// Gauss-Legendre rule on [x, x+L] discretizing the half-line (x, inf)
struct QuadratureRule {
    double x = 0.0;
    double L = 0.0;
    int m = 0;
    std::vector<double> nodes, weights;
};

// L from the Airy-kernel diagonal decay; m by log-determinant doubling
QuadratureRule build_rule(double x, double target_accuracy);

// log det(I - M), M_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j)
double fredholm_logdet(const KernelSpec& kernel, double x, const QuadratureRule& rule);
double fredholm_logdet(const std::function<double(double, double)>& kernel,
                       double x, const QuadratureRule& rule);

struct ResolventFunctionals {
    double Rxx = 0.0;       // R(x,x)
    double rho_x = 0.0;     // ((I+R)A)(x)
    double rhop_x = 0.0;    // ((I+R)A')(x)
    double bAA = 0.0;       // <(I+R)A, A>
    double bApA = 0.0;      // <(I+R)A', A>
    double bApAp = 0.0;     // <(I+R)A', A'>
    double bAApp = 0.0;     // <(I+R)A, A''> with A'' = uA
    std::vector<double> rho_nodes;
};

// resolvent of the Airy kernel on (x, inf)
ResolventFunctionals resolvent_functionals(double x, const QuadratureRule& rule);

struct TraceExpansion {
    double Q1 = 0.0, Q2 = 0.0, Q3 = 0.0;
};

// closed-form trace expansion coefficients from the resolvent brackets
TraceExpansion trace_expansion(int r, double x, const QuadratureRule& rule);

// Q_0(x) = -int_x^inf (a - x) g(a)^2 da on the Painleve grid + Airy tail
double tracy_widom_q0(double x, const Painleve2Solution& sol);

// Q_0'(x) = int_x^inf g^2 (grid + tail), used by cross-route checks
double tracy_widom_q0_deriv(double x, const Painleve2Solution& sol);

} // namespace rairy
