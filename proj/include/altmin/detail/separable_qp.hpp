#pragma once
#include <altmin/linalg.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace altmin::detail {

/// One-dimensional convex term h(t): zero, γ|t|, or the indicator of [lo, hi].
struct ScalarTerm
{
    enum class Kind { none, l1, box };
    Kind kind = Kind::none;
    double weight = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    /// argmin_t (c/2)(t − z)² + h(t)
    double prox(double z, double c) const
    {
        switch (kind) {
            case Kind::none: return z;
            case Kind::l1: {
                const double m = std::abs(z) - weight / c;
                return m > 0.0 ? std::copysign(m, z) : 0.0;
            }
            case Kind::box: return std::clamp(z, lo, hi);
        }
        return z;
    }

    double value(double t) const
    {
        switch (kind) {
            case Kind::none: return 0.0;
            case Kind::l1: return weight * std::abs(t);
            case Kind::box: return (t >= lo && t <= hi) ? 0.0 : std::numeric_limits<double>::infinity();
        }
        return 0.0;
    }
};

using ScalarTerms = std::vector<ScalarTerm>;

inline double separable_qp_objective(const Matrix& H, const Vector& q, const ScalarTerms& terms, const Vector& x)
{
    double v = 0.5 * x.dot(H * x) + q.dot(x);
    for (Eigen::Index j = 0; j < x.size(); ++j) v += terms[static_cast<std::size_t>(j)].value(x[j]);
    return v;
}

/// Cyclic coordinate descent on ½xᵀHx + qᵀx + Σ h_j(x_j) until no coordinate
/// moves by more than tol·(1 + ‖x‖∞).
inline void coordinate_descent(const Matrix& H, const Vector& q, const ScalarTerms& terms, Vector& x, double tol, std::size_t max_sweeps)
{
    const Eigen::Index n = x.size();
    Vector g = H * x + q;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double biggest = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double hjj = H(j, j);
            const double xj = terms[static_cast<std::size_t>(j)].prox(x[j] - g[j] / hjj, hjj);
            const double delta = xj - x[j];
            if (delta != 0.0) {
                x[j] = xj;
                g += delta * H.col(j);
                biggest = std::max(biggest, std::abs(delta));
            }
        }
        if (biggest <= tol * (1.0 + x.cwiseAbs().maxCoeff())) return;
    }
}

/// Given the support/active pattern of x, re-solves the reduced linear
/// system exactly and accepts the result only if it satisfies the optimality
/// conditions. Returns false (leaving x untouched) otherwise.
inline bool polish_active_set(const Matrix& H, const Vector& q, const ScalarTerms& terms, Vector& x)
{
    const Eigen::Index n = x.size();
    std::vector<Eigen::Index> free_idx;
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& t = terms[static_cast<std::size_t>(j)];
        const bool pinned = (t.kind == ScalarTerm::Kind::l1 && x[j] == 0.0)
                            || (t.kind == ScalarTerm::Kind::box && (x[j] == t.lo || x[j] == t.hi));
        if (!pinned) free_idx.push_back(j);
    }

    Vector candidate = x;
    if (!free_idx.empty()) {
        const auto k = static_cast<Eigen::Index>(free_idx.size());
        Matrix Hff(k, k);
        Vector rhs(k);
        for (Eigen::Index a = 0; a < k; ++a) {
            const Eigen::Index ja = free_idx[static_cast<std::size_t>(a)];
            double r = -q[ja];
            for (Eigen::Index j = 0; j < n; ++j) {
                if (std::find(free_idx.begin(), free_idx.end(), j) == free_idx.end()) r -= H(ja, j) * x[j];
            }
            const auto& t = terms[static_cast<std::size_t>(ja)];
            if (t.kind == ScalarTerm::Kind::l1) r -= t.weight * (x[ja] > 0.0 ? 1.0 : -1.0);
            rhs[a] = r;
            for (Eigen::Index b = 0; b < k; ++b) Hff(a, b) = H(ja, free_idx[static_cast<std::size_t>(b)]);
        }
        Hff = 0.5 * (Hff + Hff.transpose()).eval();
        Vector sol;
        try {
            sol = solve_spd(cholesky(Hff), rhs);
        } catch (const Error&) {
            return false;
        }
        for (Eigen::Index a = 0; a < k; ++a) {
            const Eigen::Index ja = free_idx[static_cast<std::size_t>(a)];
            const auto& t = terms[static_cast<std::size_t>(ja)];
            if (t.kind == ScalarTerm::Kind::l1 && sol[a] * x[ja] <= 0.0) return false;
            if (t.kind == ScalarTerm::Kind::box && (sol[a] < t.lo || sol[a] > t.hi)) return false;
            candidate[ja] = sol[a];
        }
    }

    const Vector g = H * candidate + q;
    const double slack = 1e-9 * (1.0 + g.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::find(free_idx.begin(), free_idx.end(), j) != free_idx.end()) continue;
        const auto& t = terms[static_cast<std::size_t>(j)];
        if (t.kind == ScalarTerm::Kind::l1 && std::abs(g[j]) > t.weight + slack) return false;
        if (t.kind == ScalarTerm::Kind::box) {
            if (candidate[j] == t.lo && candidate[j] < t.hi && g[j] < -slack) return false;
            if (candidate[j] == t.hi && candidate[j] > t.lo && g[j] > slack) return false;
        }
    }
    if (separable_qp_objective(H, q, terms, candidate) > separable_qp_objective(H, q, terms, x) + 1e-12 * (1.0 + std::abs(separable_qp_objective(H, q, terms, x)))) {
        return false;
    }
    x = candidate;
    return true;
}

/// Minimizes ½xᵀHx + qᵀx + Σ h_j(x_j) for SPD H, warm-started at x.
inline Vector solve_separable_qp(const Matrix& H, const Vector& q, const ScalarTerms& terms, Vector x)
{
    for (const double tol : {1e-8, 1e-11, 1e-14}) {
        coordinate_descent(H, q, terms, x, tol, 200000);
        Vector polished = x;
        if (polish_active_set(H, q, terms, polished)) return polished;
    }
    return x;
}

}  // namespace altmin::detail
