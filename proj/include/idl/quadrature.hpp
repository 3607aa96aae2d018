#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "idl/errors.hpp"

namespace idl {

struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre_reference(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        double wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
}

}  // namespace detail

// Composite Gauss-Legendre rule on (a, b) with at least `min_points` nodes,
// grouped into panels of 16 so the per-panel order stays high.
inline Quadrature composite_gauss_legendre(double a, double b, int min_points) {
    if (!(b > a)) throw Error("quadrature: empty interval");
    constexpr int kPanelNodes = 16;
    int panels = (min_points + kPanelNodes - 1) / kPanelNodes;
    if (panels < 1) panels = 1;
    std::vector<double> xr, wr;
    detail::gauss_legendre_reference(kPanelNodes, xr, wr);
    Quadrature q;
    q.nodes.reserve(static_cast<std::size_t>(panels) * kPanelNodes);
    q.weights.reserve(static_cast<std::size_t>(panels) * kPanelNodes);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int i = 0; i < kPanelNodes; ++i) {
            q.nodes.push_back(mid + 0.5 * h * xr[i]);
            q.weights.push_back(0.5 * h * wr[i]);
        }
    }
    return q;
}

}  // namespace idl
