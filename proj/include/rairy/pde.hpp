#pragma once
#include "rairy/ensemble.hpp"

#include <functional>
#include <vector>

namespace rairy {

// uniform grid of Q(tau, x) = log det(I - K^{(r)}_tau) on (x, inf)
struct Surface {
    int r = 0;
    double tau0 = 0, dtau = 0;
    double x0 = 0, dx = 0;
    int ntau = 0, nx = 0;
    std::vector<double> Q;  // row-major, Q[i*nx + j] at (tau0 + i dtau, x0 + j dx)
    double accuracy = 0.0;  // node-doubling spot-check estimate

    double at(int i, int j) const { return Q[(size_t)i * nx + j]; }
};

Surface q_surface(int r, double tau_lo, double tau_hi, double dtau,
                  double x_lo, double x_hi, double dx, double rule_accuracy);

struct ResidualReport {
    double residual = 0.0;
    double normalization = 0.0;  // largest contributing term magnitude
    double relative = 0.0;
    double h1 = 0.0, h2 = 0.0;   // stencil steps used
};

// fourth-order operator evaluated from exact mixed partials
// partial(i, j) = d^i/dtau^i d^j/dx^j Q at the probe point (i+j <= 4)
double r_airy_pde_lhs(int r, double tau, double x,
                      const std::function<double(int, int)>& partial);

// residual at a grid node, partials by centered stencils on the surface
ResidualReport r_airy_pde_residual(const Surface& s, double tau, double x);

struct VirasoroBlocks {
    double Fp = 0, Fm = 0, H1p = 0, H1m = 0, H2p = 0, H2m = 0, Gp = 0, Gm = 0;
    double dbFp = 0, dbFm = 0, db2Fp = 0, db2Fm = 0, dbGp = 0, dbGm = 0;
};

struct FiniteNReport {
    ResidualReport quartic;  // scalar quartic form
    ResidualReport det4;     // 4x4 determinant form
    VirasoroBlocks blocks;
};

// fourth-order PDE residual for f = log P(all eigenvalues <= b) on an
// (alpha, b) stencil grid
FiniteNReport finite_n_pde_residual(const SourceEnsemble& ens, double b,
                                    double h_alpha, double h_b);

} // namespace rairy
