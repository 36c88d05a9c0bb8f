#pragma once
#include <altmin/objective.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace altmin {
namespace prox {

/// Componentwise sign(z)·max(|z| − level, 0).
inline Vector soft_threshold(const Vector& z, double level)
{
    return z.unaryExpr([level](double v) {
        const double m = std::abs(v) - level;
        return m > 0.0 ? std::copysign(m, v) : 0.0;
    });
}

inline Vector project_box(const Vector& z, double lo, double hi)
{
    return z.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace prox

namespace terms {

inline BlockTerm zero()
{
    return {};
}

/// weight·‖x‖₁
inline BlockTerm l1(double weight)
{
    if (!(weight >= 0.0)) fail(Errc::invalid_argument, "l1 weight must be non-negative");
    BlockTerm t;
    t.value = [weight](const Vector& x) { return weight * x.lpNorm<1>(); };
    t.prox = [weight](const Vector& z, double m) { return prox::soft_threshold(z, weight / m); };
    t.label = "l1";
    return t;
}

/// Indicator of [lo, hi]^{n_i}.
inline BlockTerm box(double lo, double hi)
{
    if (!(lo <= hi)) fail(Errc::invalid_argument, "box needs lo <= hi");
    BlockTerm t;
    t.value = [lo, hi](const Vector& x) {
        return (x.minCoeff() >= lo && x.maxCoeff() <= hi) ? 0.0 : std::numeric_limits<double>::infinity();
    };
    t.prox = [lo, hi](const Vector& z, double) { return prox::project_box(z, lo, hi); };
    t.constrained = true;
    t.label = "box";
    return t;
}

}  // namespace terms

/// T_M^i(x), G_M^i(x) and D_i(x, M) for one block.
struct ProxMapResult
{
    std::size_t block = 0;
    double step_constant = 0.0;
    Vector t_point;
    Vector g_map;
    double d_value = 0.0;
};

inline ProxMapResult prox_map(const ObjectiveHandle& h, const Vector& x, std::size_t i, double m)
{
    detail::require_dim(h, x);
    detail::require_block(h, i);
    if (!(m > 0.0)) fail(Errc::invalid_argument, "step constant must be positive");

    const auto& term = h.term(i);
    if (!term.is_zero() && !term.prox) {
        fail(Errc::no_prox, "block " + std::to_string(i) + " has a non-smooth term without a prox");
    }

    const Vector xi = h.partition.gather(x, i);
    const Vector grad = h.block_gradient(x, i);
    const Vector z = xi - grad / m;
    Vector t = term.prox ? term.prox(z, m) : z;

    ProxMapResult r;
    r.block = i;
    r.step_constant = m;
    r.g_map = m * (xi - t);
    // ⟨∇, u−x⟩ + (M/2)‖u−x‖² = (M/2)‖u − z‖² − ‖∇‖²/(2M), so the minimand
    // scaled by −2M is ‖∇‖² − M²‖t − z‖² − 2M(g(t) − g(x)). This form is exact
    // in the smooth case, where t = z.
    double dg = 0.0;
    if (!term.is_zero()) dg = term.value(t) - term.value(xi);
    r.d_value = grad.squaredNorm() - m * m * (t - z).squaredNorm() - 2.0 * m * dg;
    r.t_point = std::move(t);
    return r;
}

inline double decrease_functional(const ObjectiveHandle& h, const Vector& x, std::size_t i, double m)
{
    return prox_map(h, x, i, m).d_value;
}

/// Default step constant for block diagnostics: the declared block Lipschitz
/// constant, or 1 when unknown.
inline double default_step(const ObjectiveHandle& h, std::size_t i)
{
    return h.block_lipschitz(i).value_or(1.0);
}

/// ‖G_M^j(x)‖₂. Zero (to rounding) right after block j was minimized exactly.
inline double stationarity_check(const ObjectiveHandle& h, const Vector& x, std::size_t j, double m)
{
    return prox_map(h, x, j, m).g_map.norm();
}

inline double stationarity_check(const ObjectiveHandle& h, const Vector& x, std::size_t j)
{
    return stationarity_check(h, x, j, default_step(h, j));
}

/// Contract for stationarity_check after exact block minimization.
inline double stationarity_tolerance(const ObjectiveHandle& h, const Vector& x)
{
    return 1e-7 * (1.0 + full_gradient(h, x).norm());
}

struct PlCertificate
{
    double lhs = 0.0;  // F*
    double rhs = 0.0;  // F(x) − D_i(x, μ_i)/(2μ_i)
    double slack = 0.0;
    bool pass = false;
};

inline constexpr double certificate_tolerance = 1e-8;

/// Checks F* ≥ F(x) − D_i(x, μ_i)/(2μ_i). Only guaranteed at points where
/// every other block is optimal (AM iterates).
inline PlCertificate prox_pl_certificate(const ObjectiveHandle& h, const Vector& x, std::size_t i, double mu_i)
{
    if (!h.optimum) fail(Errc::no_optimum, "objective has no optimum oracle");
    if (!(mu_i > 0.0)) fail(Errc::invalid_argument, "block strong convexity must be positive");
    const double fstar = h.optimum->value;
    const double d = decrease_functional(h, x, i, mu_i);
    PlCertificate c;
    c.lhs = fstar;
    c.rhs = composite_value(h, x) - d / (2.0 * mu_i);
    c.slack = c.lhs - c.rhs;
    c.pass = c.slack >= -certificate_tolerance * (1.0 + std::abs(fstar));
    return c;
}

/// D_i(x, λ2) ≥ D_i(x, λ1) − 1e-9 for 0 < λ1 < λ2 on an unconstrained block.
inline bool d_monotonicity_check(const ObjectiveHandle& h, const Vector& x, std::size_t i, double lambda1, double lambda2)
{
    detail::require_block(h, i);
    if (!(lambda1 > 0.0 && lambda1 < lambda2)) {
        fail(Errc::invalid_argument, "d_monotonicity_check needs 0 < lambda1 < lambda2");
    }
    if (h.term(i).constrained) {
        fail(Errc::constrained_block, "block " + std::to_string(i) + " has a constraint set");
    }
    return decrease_functional(h, x, i, lambda2) >= decrease_functional(h, x, i, lambda1) - 1e-9;
}

}  // namespace altmin
