#pragma once
#include <Eigen/QR>
#include <altmin/linalg.hpp>
#include <altmin/objective.hpp>
#include <altmin/problems/random.hpp>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace altmin::problems {

/// f(z) = ‖Wz − b‖₂² split into column blocks of W.
///
/// For two equal blocks, W = [A B; C D] and b = (c; d), the block minimizers
/// are the explicit updates
///   x ← (AᵀA + CᵀC)⁻¹[Aᵀ(c − By) + Cᵀ(d − Dy)]
///   y ← (BᵀB + DᵀD)⁻¹[Bᵀ(c − Ax) + Dᵀ(d − Cx)].
///
/// Declared constants are those of f itself, whose Hessian is H = 2WᵀW:
/// L = λ_max(H), μ = λ_min(H). Per block, L_i = λ_max(H_ii) and μ_i is the
/// smallest eigenvalue of the Schur complement H_ii − H_ir H_rr⁻¹ H_ri, the
/// largest μ_i with f(u) ≥ f(x) + ⟨∇f(x), u − x⟩ + (μ_i/2)‖u_i − x_i‖² for
/// all u, x. (λ_min(H_ii) alone does not give that bound when blocks couple.)
struct QuadraticSplitProblem
{
    Matrix W;
    Vector b;
    BlockPartition partition;

    std::vector<Matrix> block_columns;
    std::vector<SpdFactorization> block_gram;
    Matrix hessian;

    Vector x_star;
    double f_star = 0.0;

    /// Extreme eigenvalues of WᵀW.
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    /// Smallest eigenvalue of WᵀW above the rank threshold.
    double lambda_min_positive = 0.0;
    bool strongly_convex = false;

    std::vector<double> block_lipschitz;
    std::vector<std::optional<double>> block_strong_convexity;
    /// λ_min(H_ii), kept for comparison with the Schur-complement constants.
    std::vector<double> block_hessian_lambda_min;

    double value(const Vector& z) const { return (W * z - b).squaredNorm(); }

    Vector gradient(const Vector& z) const { return 2.0 * (W.transpose() * (W * z - b)); }

    Vector block_gradient(const Vector& z, std::size_t i) const
    {
        return 2.0 * (block_columns[i].transpose() * (W * z - b));
    }

    /// Solves the restricted normal equations W_iᵀW_i x_i = W_iᵀ(b − Σ_{j≠i} W_j x_j).
    Vector block_argmin(const Vector& z, std::size_t i) const
    {
        const Vector zi = partition.gather(z, i);
        const Vector rest = b - W * z + block_columns[i] * zi;
        return solve_spd(block_gram[i], block_columns[i].transpose() * rest);
    }

    /// max over the sublevel set {f ≤ f(x0)} of the distance to the solution set.
    double level_set_radius(const Vector& x0) const
    {
        return std::sqrt(std::max(0.0, value(x0) - f_star) / lambda_min_positive);
    }

    ObjectiveHandle handle() const
    {
        auto self = std::make_shared<const QuadraticSplitProblem>(*this);
        ObjectiveHandle h;
        h.name = "quadratic";
        h.partition = partition;
        h.smooth_value = [self](const Vector& z) { return self->value(z); };
        h.block_gradient = [self](const Vector& z, std::size_t i) { return self->block_gradient(z, i); };
        h.block_argmin = [self](const Vector& z, std::size_t i) { return self->block_argmin(z, i); };
        h.curvature = [self](const Vector& d) { return 2.0 * (self->W * d).squaredNorm(); };
        h.terms.assign(partition.num_blocks(), BlockTerm{});
        h.constants.lipschitz = 2.0 * lambda_max;
        if (strongly_convex) {
            h.constants.strong_convexity = 2.0 * lambda_min;
            h.constants.pl = 2.0 * lambda_min;
        }
        for (auto l : block_lipschitz) h.constants.block_lipschitz.emplace_back(l);
        h.constants.block_strong_convexity = block_strong_convexity;
        h.optimum = Optimum{x_star, f_star};
        return h;
    }
};

namespace detail {

inline double schur_lambda_min(const Matrix& H, const BlockPartition& p, std::size_t i)
{
    const auto& own = p.block(i);
    const Matrix hii = principal_submatrix(H, own);
    if (p.num_blocks() == 1) return spectral_extremes(hii).lambda_min;
    const auto rest = p.complement(i);
    const Matrix hrr = principal_submatrix(H, rest);
    Matrix hir(static_cast<Eigen::Index>(own.size()), static_cast<Eigen::Index>(rest.size()));
    for (std::size_t a = 0; a < own.size(); ++a)
        for (std::size_t c = 0; c < rest.size(); ++c)
            hir(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) = H(static_cast<Eigen::Index>(own[a]), static_cast<Eigen::Index>(rest[c]));
    const auto f = cholesky(hrr);
    Matrix s = hii;
    for (Eigen::Index a = 0; a < hir.rows(); ++a) {
        const Vector col = solve_spd(f, hir.row(a).transpose());
        for (Eigen::Index c = 0; c < hir.rows(); ++c) s(c, a) -= hir.row(c).dot(col);
    }
    s = (0.5 * (s + s.transpose())).eval();
    return spectral_extremes(s).lambda_min;
}

}  // namespace detail

/// Builds the problem for an arbitrary W, b and partition. The minimizer is
/// the normal-equations solution when W has full column rank and the
/// minimum-norm least-squares solution otherwise (unless `x_star` is given).
inline QuadraticSplitProblem make_quadratic_from(Matrix W, Vector b, BlockPartition partition, std::optional<Vector> x_star = std::nullopt)
{
    if (W.rows() != b.size()) fail(Errc::dimension_mismatch, "W and b disagree in row count");
    if (static_cast<std::size_t>(W.cols()) != partition.total_dim()) {
        fail(Errc::dimension_mismatch, "W column count differs from the partition dimension");
    }
    require_finite(W, "W");
    require_finite(b, "b");

    QuadraticSplitProblem p;
    p.W = std::move(W);
    p.b = std::move(b);
    p.partition = std::move(partition);

    Matrix gram = p.W.transpose() * p.W;
    gram = (0.5 * (gram + gram.transpose())).eval();
    p.hessian = 2.0 * gram;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(gram), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    p.lambda_min = std::max(0.0, ev.minCoeff());
    p.lambda_max = ev.maxCoeff();
    const double rank_threshold = 1e-12 * p.lambda_max;
    p.strongly_convex = p.lambda_min > rank_threshold;
    p.lambda_min_positive = p.lambda_max;
    for (Eigen::Index j = 0; j < ev.size(); ++j)
        if (ev[j] > rank_threshold) p.lambda_min_positive = std::min(p.lambda_min_positive, ev[j]);

    const std::size_t n = p.partition.num_blocks();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& idx = p.partition.block(i);
        Matrix cols(p.W.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t j = 0; j < idx.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = p.W.col(static_cast<Eigen::Index>(idx[j]));
        Matrix g = cols.transpose() * cols;
        g = (0.5 * (g + g.transpose())).eval();
        p.block_gram.push_back(cholesky(g));
        p.block_columns.push_back(std::move(cols));

        const Matrix hii = principal_submatrix(p.hessian, idx);
        const auto ext = spectral_extremes(hii);
        p.block_lipschitz.push_back(ext.lambda_max);
        p.block_hessian_lambda_min.push_back(ext.lambda_min);
        std::optional<double> mu_i;
        if (p.strongly_convex) {
            try {
                const double s = detail::schur_lambda_min(p.hessian, p.partition, i);
                if (s > rank_threshold) mu_i = s;
            } catch (const Error&) {
            }
        }
        p.block_strong_convexity.push_back(mu_i);
    }

    if (x_star) {
        p.x_star = std::move(*x_star);
    } else if (p.strongly_convex) {
        p.x_star = solve_spd(cholesky(gram), p.W.transpose() * p.b);
    } else {
        p.x_star = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(Eigen::MatrixXd(p.W)).solve(Eigen::VectorXd(p.b));
    }
    p.f_star = p.value(p.x_star);
    return p;
}

/// Square W = U·diag(σ)·Vᵀ with σ geometrically spaced on [1, √cond], so that
/// λ_max(WᵀW)/λ_min(WᵀW) = cond; b is standard normal. Deterministic per seed.
inline QuadraticSplitProblem make_quadratic(std::uint64_t seed, std::size_t dim, double cond_number, std::size_t n_blocks = 2)
{
    if (dim == 0 || n_blocks == 0 || dim % n_blocks != 0) {
        fail(Errc::bad_dimension, "dimension " + std::to_string(dim) + " cannot be split into "
                                      + std::to_string(n_blocks) + " equal blocks");
    }
    if (!(cond_number >= 1.0)) fail(Errc::invalid_argument, "condition number must be at least 1");
    Rng rng(seed);
    const auto m = static_cast<Eigen::Index>(dim);
    const Matrix U = random_orthogonal(rng, m);
    const Matrix V = random_orthogonal(rng, m);
    const Vector sigma = geometric_spacing(1.0, std::sqrt(cond_number), m);
    Matrix W = U * sigma.asDiagonal() * V.transpose();
    Vector b = gaussian_vector(rng, m);
    return make_quadratic_from(std::move(W), std::move(b), BlockPartition::equal(dim, n_blocks));
}

/// Same construction with the `deficiency` smallest singular values set to
/// zero, so WᵀW is singular and the minimizer set is an affine subspace.
/// x_star is the minimum-norm solution V Σ⁺ Uᵀ b.
inline QuadraticSplitProblem make_rank_deficient_quadratic(std::uint64_t seed, std::size_t dim, double cond_number, std::size_t deficiency = 1, std::size_t n_blocks = 2)
{
    if (dim == 0 || n_blocks == 0 || dim % n_blocks != 0 || deficiency >= dim / n_blocks) {
        fail(Errc::bad_dimension, "invalid rank-deficient quadratic shape");
    }
    Rng rng(seed ^ 0x5eed5eedULL);
    const auto m = static_cast<Eigen::Index>(dim);
    const Matrix U = random_orthogonal(rng, m);
    const Matrix V = random_orthogonal(rng, m);
    Vector sigma = geometric_spacing(1.0, std::sqrt(cond_number), m);
    Vector sigma_pinv = sigma.cwiseInverse();
    for (std::size_t j = 0; j < deficiency; ++j) {
        sigma[static_cast<Eigen::Index>(j)] = 0.0;
        sigma_pinv[static_cast<Eigen::Index>(j)] = 0.0;
    }
    Matrix W = U * sigma.asDiagonal() * V.transpose();
    Vector b = gaussian_vector(rng, m);
    Vector x_star = V * sigma_pinv.asDiagonal() * (U.transpose() * b);
    return make_quadratic_from(std::move(W), std::move(b), BlockPartition::equal(dim, n_blocks), std::move(x_star));
}

/// Diagonal W, so WᵀW is block diagonal and each block is solved exactly in one step.
inline QuadraticSplitProblem make_diagonal_quadratic(const Vector& diag, const Vector& b, BlockPartition partition)
{
    return make_quadratic_from(Matrix(diag.asDiagonal()), b, std::move(partition));
}

}  // namespace altmin::problems
