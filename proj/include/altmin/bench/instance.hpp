#pragma once
#include <altmin/bench/config.hpp>
#include <altmin/problems/composite.hpp>
#include <altmin/problems/nonlinear.hpp>
#include <altmin/problems/quadratic.hpp>
#include <optional>
#include <string>

namespace altmin::bench {

/// An instance plus the derived quantities the certificates draw on.
struct BuiltInstance
{
    InstanceSpec spec;
    ObjectiveHandle handle;
    /// ‖x⁰ − x*‖ for the zero starting point.
    double distance_to_optimum = 0.0;
    /// Distance bound from the initial level set to the solution set (quadratics only).
    std::optional<double> level_set_radius;
    /// λ_min(H) > 0 for the smooth part; absent when f is not strongly convex.
    std::optional<double> mu_star;
};

inline std::string describe(const InstanceSpec& s)
{
    std::string d = to_string(s.kind) + "(seed=" + std::to_string(s.seed) + ", dim=" + std::to_string(s.dim);
    switch (s.kind) {
        case InstanceKind::quadratic:
        case InstanceKind::rank_deficient:
            d += ", cond=" + detail::format_double(s.cond_number) + ", blocks=" + std::to_string(s.blocks);
            break;
        case InstanceKind::composite_l1:
            d += ", cond=" + detail::format_double(s.cond_number) + ", gamma=" + detail::format_double(s.gamma);
            break;
        case InstanceKind::composite_box:
            d += ", cond=" + detail::format_double(s.cond_number) + ", box=[" + detail::format_double(s.lo) + ", "
                 + detail::format_double(s.hi) + "]";
            break;
        case InstanceKind::nonlinear:
            d += ", m=" + std::to_string(s.m) + ", eps=" + detail::format_double(s.eps) + ", blocks=" + std::to_string(s.blocks);
            break;
    }
    return d + ")";
}

inline BuiltInstance build_instance(const InstanceSpec& spec)
{
    BuiltInstance out;
    out.spec = spec;
    std::optional<problems::QuadraticSplitProblem> quad;
    switch (spec.kind) {
        case InstanceKind::quadratic:
            quad = problems::make_quadratic(spec.seed, spec.dim, spec.cond_number, spec.blocks);
            out.handle = quad->handle();
            break;
        case InstanceKind::rank_deficient:
            quad = problems::make_rank_deficient_quadratic(spec.seed, spec.dim, spec.cond_number, spec.deficiency, spec.blocks);
            out.handle = quad->handle();
            break;
        case InstanceKind::composite_l1: {
            auto c = problems::make_composite(spec.seed, spec.dim, spec.gamma, spec.cond_number);
            out.handle = c.handle();
            quad = std::move(c.smooth);
            break;
        }
        case InstanceKind::composite_box: {
            auto c = problems::make_box_composite(spec.seed, spec.dim, spec.lo, spec.hi, spec.cond_number);
            out.handle = c.handle();
            quad = std::move(c.smooth);
            break;
        }
        case InstanceKind::nonlinear: {
            auto p = problems::make_nonlinear_pl(spec.seed, spec.dim, spec.m, spec.eps, spec.blocks);
            out.handle = p.handle();
            break;
        }
    }
    const Vector x0 = Vector::Zero(static_cast<Eigen::Index>(out.handle.dim()));
    out.distance_to_optimum = (x0 - out.handle.optimum->point).norm();
    if (quad) {
        if (spec.kind == InstanceKind::quadratic || spec.kind == InstanceKind::rank_deficient) {
            out.level_set_radius = quad->level_set_radius(x0);
        }
        if (quad->strongly_convex) out.mu_star = 2.0 * quad->lambda_min;
    }
    return out;
}

}  // namespace altmin::bench
