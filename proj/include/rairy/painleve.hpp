#pragma once
#include <vector>

namespace rairy {

// Hastings-McLeod solution of g'' = x g + 2 g^3 with g ~ Ai at +inf,
// tabulated on a uniform grid.
struct Painleve2Solution {
    double amin = 0, amax = 0, h = 0;
    std::vector<double> alpha, g, gp;
    double residual_bound = 0;   // max |g''_fd - (a g + 2 g^3)| over interior
    double boundary_miss = 0;    // |g(amin) - left asymptote| after matching

    double eval_g(double a) const;
    double eval_gp(double a) const;
};

// Integrates leftward from alpha_max (Airy seed), slope matched by bisection
// against the left asymptote sqrt(-a/2)(1 + 1/(8a^3) - 73/(128a^6)).
Painleve2Solution hastings_mcleod(double alpha_min = -10.0, double alpha_max = 10.0,
                                  int n_nodes = 4001);

} // namespace rairy
