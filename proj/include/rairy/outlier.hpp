#pragma once
#include <complex>
#include <vector>

namespace rairy {

enum class OutlierSign { plus, minus };

struct OutlierSpec {
    int r = 0;
    double tau = 0.0;       // tau <= 0 supported
    OutlierSign sign = OutlierSign::plus;
};

// A_r^+(u;tau) = (-1)^r (d/du + tau)^r Ai(u), reduced to p(u)Ai + q(u)Ai'
// via Ai'' = u Ai.  A_r^-(u;tau) is the contour-integral companion, computed
// from real-line integral representations (see outlier.cpp).
double outlier_airy(double u, const OutlierSpec& spec);

// coefficient polynomials of A_r^+ in the {Ai, Ai'} basis (sign included):
// A_r^+(u) = sum pA[k] u^k * Ai(u) + sum pAp[k] u^k * Ai'(u)
void outlier_plus_coeffs(int r, double tau, std::vector<double>& pA,
                         std::vector<double>& pAp);

// Truncated three-segment path for the defining contour integral:
// ray at angle 5pi/6, horizontal run below the pole -i*tau, ray at pi/6.
struct ContourPath {
    double x_half = 1.5;    // horizontal half-width
    double height = 0.5;    // Im of the horizontal segment
    double ray_len = 9.0;   // truncation length along each ray
    double panel = 0.25;    // composite panel width
    int nodes = 16;         // Gauss nodes per panel

    static ContourPath standard(double tau);
};

// direct quadrature of the defining contour integral; imaginary part is a
// numerical-error indicator (the true value is real)
std::complex<double> contour_airy(double u, const OutlierSpec& spec,
                                  const ContourPath& path);

} // namespace rairy
