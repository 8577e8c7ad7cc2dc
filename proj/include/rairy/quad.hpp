#pragma once
#include <vector>
#include <cmath>
#include <cstddef>

namespace rairy {

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n.
struct GaussLegendre {
    std::vector<double> x, w;

    explicit GaussLegendre(int n) : x(n), w(n) {
        const double pi = 3.14159265358979323846;
        for (int i = 0; i < n; ++i) {
            // Chebyshev-like initial guess
            double z = std::cos(pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
                }
                pp = n * (z * p0 - p1) / (z * z - 1.0);
                double dz = p0 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-15) break;
            }
            x[n - 1 - i] = z;
            w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
    }
};

// nodes/weights mapped to [a,b]
struct MappedRule {
    std::vector<double> x, w;

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
        return s;
    }
};

inline MappedRule gl_on(double a, double b, const GaussLegendre& g) {
    MappedRule r;
    size_t n = g.x.size();
    r.x.resize(n);
    r.w.resize(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (size_t i = 0; i < n; ++i) {
        r.x[i] = c + h * g.x[i];
        r.w[i] = h * g.w[i];
    }
    return r;
}

// composite rule: [a,b] split into npanels equal panels, gl each
inline MappedRule gl_composite(double a, double b, int npanels, const GaussLegendre& g) {
    MappedRule r;
    double h = (b - a) / npanels;
    for (int p = 0; p < npanels; ++p) {
        MappedRule part = gl_on(a + p * h, a + (p + 1) * h, g);
        r.x.insert(r.x.end(), part.x.begin(), part.x.end());
        r.w.insert(r.w.end(), part.w.begin(), part.w.end());
    }
    return r;
}

} // namespace rairy
