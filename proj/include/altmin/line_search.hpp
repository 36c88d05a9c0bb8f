#pragma once
#include <altmin/objective.hpp>
#include <algorithm>
#include <cmath>
#include <functional>

namespace altmin {

/// Golden-section search for the minimizer of a unimodal `phi` on [lo, hi],
/// stopping when the bracket is narrower than `tol`.
inline double golden_section_minimize(const std::function<double(double)>& phi, double lo, double hi, double tol)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = phi(c), fd = phi(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = phi(d);
        }
    }
    return 0.5 * (a + b);
}

struct LineSearchResult
{
    double beta = 0.0;
    Vector y;
    double value = 0.0;
};

/// argmin_{β∈[0,1]} f(x + β(v − x)).
///
/// Quadratic objectives (those exposing `curvature`) use the closed-form
/// minimizer. Otherwise golden-section search narrows the bracket and a
/// bisection on the directional derivative finishes it, since function values
/// alone cannot resolve β much below sqrt(machine epsilon). The result never
/// has a larger value than either endpoint.
inline LineSearchResult exact_line_search(const ObjectiveHandle& h, const Vector& x, const Vector& v, double tol = 1e-10)
{
    detail::require_dim(h, x);
    detail::require_dim(h, v);
    const Vector d = v - x;
    const double fx = h.smooth_value(x);
    if (d.squaredNorm() == 0.0) return {0.0, x, fx};

    double beta = 0.0;
    if (h.curvature) {
        const double slope = full_gradient(h, x).dot(d);
        const double curv = h.curvature(d);
        if (curv > 0.0) {
            beta = std::clamp(-slope / curv, 0.0, 1.0);
        } else {
            beta = slope < 0.0 ? 1.0 : 0.0;
        }
    } else {
        auto phi = [&](double b) { return h.smooth_value(x + b * d); };
        auto dphi = [&](double b) { return full_gradient(h, x + b * d).dot(d); };
        const double coarse = std::max(tol, 1e-6);
        double lo = 0.0, hi = 1.0;
        const double mid = golden_section_minimize(phi, lo, hi, coarse);
        lo = std::max(0.0, mid - coarse);
        hi = std::min(1.0, mid + coarse);
        double dlo = dphi(lo), dhi = dphi(hi);
        if (dlo < 0.0 && dhi > 0.0) {
            while (hi - lo > tol) {
                const double m = 0.5 * (lo + hi);
                const double dm = dphi(m);
                if (dm == 0.0) {
                    lo = hi = m;
                    break;
                }
                (dm < 0.0 ? lo : hi) = m;
            }
            beta = 0.5 * (lo + hi);
        } else if (dhi <= 0.0 && hi == 1.0) {
            beta = 1.0;
        } else if (dlo >= 0.0 && lo == 0.0) {
            beta = 0.0;
        } else {
            beta = mid;
        }
    }

    Vector y = x + beta * d;
    double fy = h.smooth_value(y);
    const double fv = h.smooth_value(v);
    if (fv < fy) {
        beta = 1.0;
        y = v;
        fy = fv;
    }
    if (fx < fy) {
        beta = 0.0;
        y = x;
        fy = fx;
    }
    return {beta, std::move(y), fy};
}

}  // namespace altmin
