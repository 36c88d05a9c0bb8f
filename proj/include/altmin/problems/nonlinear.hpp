#pragma once
#include <altmin/objective.hpp>
#include <altmin/problems/random.hpp>
#include <cmath>
#include <memory>
#include <string>

namespace altmin::problems {

/// f(x) = ‖g(x)‖₂² for g(x) = A x + ε S sin(x) + c, g: ℝⁿ → ℝᵐ with m < n.
///
/// A has singular values in [1, 3] (σ_min(A) = 1) and ‖S‖₂ = 1, so
/// σ_min(J(x)) ≥ 1 − ε for J = A + ε S diag(cos x) and λ_min(JJᵀ) ≥ (1 − ε)² =: μ_J.
/// With ε = ½ this is ¼. c is chosen so that g(root) = 0, hence f* = 0.
/// f is PL with constant 2μ_J: ½‖∇f‖² = 2 gᵀJJᵀg ≥ 2μ_J f.
struct NonlinearEqPlProblem
{
    Matrix A;
    Matrix S;
    Vector c;
    double eps = 0.5;
    double mu_j = 0.25;
    Vector root;
    BlockPartition partition;

    Vector residual(const Vector& x) const
    {
        return A * x + eps * (S * x.array().sin().matrix()) + c;
    }

    Matrix jacobian(const Vector& x) const
    {
        return A + eps * (S * x.array().cos().matrix().asDiagonal());
    }

    double value(const Vector& x) const { return residual(x).squaredNorm(); }

    Vector gradient(const Vector& x) const { return 2.0 * (jacobian(x).transpose() * residual(x)); }

    Vector block_gradient(const Vector& x, std::size_t i) const
    {
        return partition.gather(gradient(x), i);
    }

    /// Levenberg-Marquardt on block i. Each accepted step strictly decreases
    /// f, so the result never has a larger value than the input; it is a
    /// stationary point of f over the block to rounding.
    Vector block_argmin(const Vector& x, std::size_t i) const
    {
        const auto& idx = partition.block(i);
        Vector z = x;
        Vector r = residual(z);
        double fz = r.squaredNorm();
        double lambda = 1e-3;
        for (int it = 0; it < 500; ++it) {
            const Matrix Jfull = jacobian(z);
            Matrix J(Jfull.rows(), static_cast<Eigen::Index>(idx.size()));
            for (std::size_t j = 0; j < idx.size(); ++j) J.col(static_cast<Eigen::Index>(j)) = Jfull.col(static_cast<Eigen::Index>(idx[j]));
            const Vector g = J.transpose() * r;
            if (g.norm() <= 1e-15 * (1.0 + r.norm())) break;
            const Matrix JtJ = J.transpose() * J;
            bool accepted = false;
            while (lambda < 1e16) {
                Matrix M = JtJ;
                M.diagonal().array() += lambda * (1.0 + JtJ.diagonal().array());
                const Vector step = -Eigen::LLT<Eigen::MatrixXd>(Eigen::MatrixXd(M)).solve(Eigen::VectorXd(g));
                Vector trial = z;
                for (std::size_t j = 0; j < idx.size(); ++j) trial[static_cast<Eigen::Index>(idx[j])] += step[static_cast<Eigen::Index>(j)];
                const Vector rt = residual(trial);
                const double ft = rt.squaredNorm();
                if (ft < fz) {
                    const double moved = step.norm();
                    z = std::move(trial);
                    r = rt;
                    fz = ft;
                    lambda = std::max(lambda / 3.0, 1e-15);
                    accepted = true;
                    if (moved <= 1e-15 * (1.0 + z.norm())) it = 500;
                    break;
                }
                lambda *= 4.0;
            }
            if (!accepted) break;
        }
        return partition.gather(z, i);
    }

    ObjectiveHandle handle() const
    {
        auto self = std::make_shared<const NonlinearEqPlProblem>(*this);
        ObjectiveHandle h;
        h.name = "nonlinear";
        h.partition = partition;
        h.smooth_value = [self](const Vector& x) { return self->value(x); };
        h.block_gradient = [self](const Vector& x, std::size_t i) { return self->block_gradient(x, i); };
        h.block_argmin = [self](const Vector& x, std::size_t i) { return self->block_argmin(x, i); };
        h.terms.assign(partition.num_blocks(), BlockTerm{});
        h.constants.pl = 2.0 * mu_j;
        h.optimum = Optimum{root, 0.0};
        return h;
    }
};

inline NonlinearEqPlProblem make_nonlinear_pl(std::uint64_t seed, std::size_t n = 20, std::size_t m = 10, double eps = 0.5, std::size_t n_blocks = 4)
{
    if (m == 0 || m >= n) fail(Errc::bad_shape, "need 0 < m < n, got m=" + std::to_string(m) + ", n=" + std::to_string(n));
    if (!(eps >= 0.0 && eps < 1.0)) fail(Errc::invalid_argument, "eps must lie in [0, 1)");
    Rng rng(seed);
    const auto mi = static_cast<Eigen::Index>(m);
    const auto ni = static_cast<Eigen::Index>(n);

    NonlinearEqPlProblem p;
    p.partition = BlockPartition::equal(n, n_blocks);
    const Matrix U = random_orthogonal(rng, mi);
    const Matrix V = random_orthogonal(rng, ni);
    Vector sigma(mi);
    for (Eigen::Index j = 0; j < mi; ++j) sigma[j] = mi == 1 ? 1.0 : 1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(mi - 1);
    p.A = U * sigma.asDiagonal() * V.leftCols(mi).transpose();

    Matrix S = gaussian_matrix(rng, mi, ni);
    const Matrix sst = S * S.transpose();
    S /= std::sqrt(spectral_extremes(Matrix(0.5 * (sst + sst.transpose()))).lambda_max);
    p.S = std::move(S);

    p.eps = eps;
    p.mu_j = (1.0 - eps) * (1.0 - eps);
    p.root = gaussian_vector(rng, ni);
    p.c = -(p.A * p.root + eps * (p.S * p.root.array().sin().matrix()));
    return p;
}

}  // namespace altmin::problems
