#pragma once

namespace rairy {

struct AiryPair {
    double A;   // Ai(x)
    double Ap;  // Ai'(x)
};

// Ai and Ai' on the real line.
// |x| <= 4: Maclaurin series; 4 < x <= 12 and -20 <= x < -4: Taylor-series
// marching of A'' = xA from precomputed anchors; outside: asymptotic series.
AiryPair airy(double x);

inline double airy_A(double x) { return airy(x).A; }
inline double airy_Ap(double x) { return airy(x).Ap; }

// diagonal of the Airy kernel, A'(x)^2 - x A(x)^2
double airy_kernel_diag(double x);

} // namespace rairy
