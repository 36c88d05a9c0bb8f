#pragma once
#include <altmin/detail/separable_qp.hpp>
#include <altmin/problems/quadratic.hpp>
#include <altmin/prox.hpp>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace altmin::problems {

/// Description of one block term g_i, convertible both to a BlockTerm and to
/// the per-coordinate form used by the reference solvers.
struct TermSpec
{
    enum class Kind { zero, l1, box };
    Kind kind = Kind::zero;
    double weight = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    static TermSpec zero() { return {}; }
    static TermSpec l1(double w) { return {Kind::l1, w, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()}; }
    static TermSpec box(double lo, double hi) { return {Kind::box, 0.0, lo, hi}; }

    BlockTerm block_term() const
    {
        switch (kind) {
            case Kind::zero: return terms::zero();
            case Kind::l1: return terms::l1(weight);
            case Kind::box: return terms::box(lo, hi);
        }
        return terms::zero();
    }

    altmin::detail::ScalarTerm scalar() const
    {
        altmin::detail::ScalarTerm t;
        if (kind == Kind::l1) {
            t.kind = altmin::detail::ScalarTerm::Kind::l1;
            t.weight = weight;
        } else if (kind == Kind::box) {
            t.kind = altmin::detail::ScalarTerm::Kind::box;
            t.lo = lo;
            t.hi = hi;
        }
        return t;
    }
};

/// F(z) = ‖Wz − b‖₂² + Σ g_i(z_i) with g_i from {zero, ℓ1, box}.
struct CompositeQuadraticProblem
{
    QuadraticSplitProblem smooth;
    std::vector<TermSpec> term_specs;

    Vector x_star;
    double f_star = 0.0;
    /// F* from proximal gradient and from coordinate descent, kept for inspection.
    double f_star_prox_gradient = 0.0;
    double f_star_coordinate_descent = 0.0;

    double term_value(const Vector& z) const
    {
        double v = 0.0;
        for (std::size_t i = 0; i < term_specs.size(); ++i) {
            const auto t = term_specs[i].scalar();
            for (auto j : smooth.partition.block(i)) v += t.value(z[static_cast<Eigen::Index>(j)]);
        }
        return v;
    }

    double value(const Vector& z) const { return smooth.value(z) + term_value(z); }

    altmin::detail::ScalarTerms scalar_terms() const
    {
        altmin::detail::ScalarTerms out(smooth.partition.total_dim());
        for (std::size_t i = 0; i < term_specs.size(); ++i)
            for (auto j : smooth.partition.block(i)) out[j] = term_specs[i].scalar();
        return out;
    }

    /// Exact minimizer of F over block i: ‖W_i u − r‖² + g_i(u) with
    /// r = b − Σ_{j≠i} W_j z_j, warm-started at the current block.
    Vector block_argmin(const Vector& z, std::size_t i) const
    {
        if (term_specs[i].kind == TermSpec::Kind::zero) return smooth.block_argmin(z, i);
        const Matrix& Wi = smooth.block_columns[i];
        Vector zi = smooth.partition.gather(z, i);
        const Vector r = smooth.b - smooth.W * z + Wi * zi;
        const Matrix H = 2.0 * smooth.block_gram[i].source;
        const Vector q = -2.0 * (Wi.transpose() * r);
        const altmin::detail::ScalarTerms t(static_cast<std::size_t>(zi.size()), term_specs[i].scalar());
        for (Eigen::Index j = 0; j < zi.size(); ++j) zi[j] = t[static_cast<std::size_t>(j)].prox(zi[j], 1.0);
        return altmin::detail::solve_separable_qp(H, q, t, zi);
    }

    /// Norm of the full gradient mapping at step 1/L (zero exactly at minimizers).
    double gradient_mapping_norm(const Vector& z) const
    {
        const double L = 2.0 * smooth.lambda_max;
        const Vector g = smooth.gradient(z);
        const auto st = scalar_terms();
        Vector t(z.size());
        for (Eigen::Index j = 0; j < z.size(); ++j) t[j] = st[static_cast<std::size_t>(j)].prox(z[j] - g[j] / L, L);
        return L * (z - t).norm();
    }

    ObjectiveHandle handle() const
    {
        auto self = std::make_shared<const CompositeQuadraticProblem>(*this);
        ObjectiveHandle h = smooth.handle();
        h.name = "composite";
        h.block_argmin = [self](const Vector& z, std::size_t i) { return self->block_argmin(z, i); };
        h.terms.clear();
        for (const auto& s : term_specs) h.terms.push_back(s.block_term());
        h.optimum = Optimum{x_star, f_star};
        return h;
    }
};

namespace detail {

inline Vector proximal_gradient_reference(const QuadraticSplitProblem& q, const altmin::detail::ScalarTerms& st, Vector x, double tol, std::size_t max_iters)
{
    const double L = 2.0 * q.lambda_max;
    const Matrix H = q.hessian;
    const Vector lin = -2.0 * (q.W.transpose() * q.b);
    // FISTA with restart on non-monotone steps; the stopping test is the
    // gradient-mapping norm at the current point.
    Vector y = x;
    double t = 1.0;
    double fx = altmin::detail::separable_qp_objective(H, lin, st, x);
    for (std::size_t it = 0; it < max_iters; ++it) {
        const Vector gy = H * y + lin;
        Vector xn(x.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) xn[j] = st[static_cast<std::size_t>(j)].prox(y[j] - gy[j] / L, L);
        const double fn = altmin::detail::separable_qp_objective(H, lin, st, xn);
        if (fn > fx && t > 1.0) {
            y = x;
            t = 1.0;
            continue;
        }
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        y = xn + ((t - 1.0) / tn) * (xn - x);
        t = tn;
        x = std::move(xn);
        fx = fn;

        const Vector gx = H * x + lin;
        Vector tx(x.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) tx[j] = st[static_cast<std::size_t>(j)].prox(x[j] - gx[j] / L, L);
        if (L * (x - tx).norm() <= tol) break;
    }
    return x;
}

}  // namespace detail

/// Attaches the given terms to a quadratic and computes the reference
/// optimum with two independent methods (accelerated proximal gradient and
/// coordinate descent with an active-set polish). Throws if they disagree on
/// F* by more than 1e-10·(1 + |F*|).
inline CompositeQuadraticProblem make_composite_from(QuadraticSplitProblem smooth, std::vector<TermSpec> specs)
{
    if (specs.size() != smooth.partition.num_blocks()) {
        fail(Errc::dimension_mismatch, "need one term per block");
    }
    CompositeQuadraticProblem p;
    p.smooth = std::move(smooth);
    p.term_specs = std::move(specs);
    for (const auto& s : p.term_specs) {
        if (s.kind == TermSpec::Kind::l1 && !(s.weight >= 0.0)) fail(Errc::invalid_argument, "l1 weight must be non-negative");
        if (s.kind == TermSpec::Kind::box && !(s.lo <= s.hi)) fail(Errc::invalid_argument, "box needs lo <= hi");
    }
    const auto st = p.scalar_terms();
    Vector start = Vector::Zero(static_cast<Eigen::Index>(p.smooth.partition.total_dim()));
    for (Eigen::Index j = 0; j < start.size(); ++j) start[j] = st[static_cast<std::size_t>(j)].prox(0.0, 1.0);

    const double tol = 1e-12 * (1.0 + p.smooth.b.norm());
    const Vector x_pg = detail::proximal_gradient_reference(p.smooth, st, start, tol, 2000000);
    const Vector lin = -2.0 * (p.smooth.W.transpose() * p.smooth.b);
    const Vector x_cd = altmin::detail::solve_separable_qp(p.smooth.hessian, lin, st, start);

    p.f_star_prox_gradient = p.value(x_pg);
    p.f_star_coordinate_descent = p.value(x_cd);
    const double scale = 1.0 + std::abs(p.f_star_coordinate_descent);
    if (std::abs(p.f_star_prox_gradient - p.f_star_coordinate_descent) > 1e-10 * scale) {
        fail(Errc::invalid_argument, "reference optima disagree: " + std::to_string(p.f_star_prox_gradient)
                                         + " vs " + std::to_string(p.f_star_coordinate_descent));
    }
    const bool cd_better = p.gradient_mapping_norm(x_cd) <= p.gradient_mapping_norm(x_pg);
    p.x_star = cd_better ? x_cd : x_pg;
    p.f_star = p.value(p.x_star);
    return p;
}

/// ℓ1 term γ‖·‖₁ on block 0, no term on block 1.
inline CompositeQuadraticProblem make_composite(std::uint64_t seed, std::size_t dim, double gamma, double cond_number = 10.0)
{
    if (!(gamma >= 0.0)) fail(Errc::invalid_argument, "gamma must be non-negative");
    return make_composite_from(make_quadratic(seed, dim, cond_number, 2), {TermSpec::l1(gamma), TermSpec::zero()});
}

/// Box indicator [lo, hi] on both blocks.
inline CompositeQuadraticProblem make_box_composite(std::uint64_t seed, std::size_t dim, double lo, double hi, double cond_number = 10.0)
{
    return make_composite_from(make_quadratic(seed, dim, cond_number, 2), {TermSpec::box(lo, hi), TermSpec::box(lo, hi)});
}

}  // namespace altmin::problems
