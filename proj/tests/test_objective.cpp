#include "helpers.hpp"

using namespace altmin;
using namespace testing_support;

namespace {

/// f(x) = ½‖x‖² on blocks {0}, {1}.
ObjectiveHandle half_norm()
{
    ObjectiveHandle h;
    h.partition = BlockPartition::contiguous({1, 1});
    h.smooth_value = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
    h.block_gradient = [p = h.partition](const Vector& x, std::size_t i) { return p.gather(x, i); };
    return h;
}

}  // namespace

TEST(BlockPartition, Validates)
{
    EXPECT_ERRC(BlockPartition(3, {{0, 1}}), Errc::bad_dimension);
    EXPECT_ERRC(BlockPartition(2, {{0, 1}, {1}}), Errc::bad_dimension);
    EXPECT_ERRC(BlockPartition(2, {{0, 1}, {}}), Errc::bad_dimension);
    EXPECT_ERRC(BlockPartition(2, {{0, 2}}), Errc::bad_dimension);
    EXPECT_ERRC(BlockPartition::equal(5, 2), Errc::bad_dimension);
    const BlockPartition p(4, {{3, 0}, {1, 2}});
    EXPECT_EQ(p.num_blocks(), 2u);
    Vector x(4);
    x << 10, 11, 12, 13;
    const Vector b0 = p.gather(x, 0);
    EXPECT_EQ(b0[0], 13);
    EXPECT_EQ(b0[1], 10);
    Vector y = Vector::Zero(4);
    p.scatter(y, 1, p.gather(x, 1));
    EXPECT_EQ(y[1], 11);
    EXPECT_EQ(y[2], 12);
    EXPECT_EQ(y[0], 0);
    EXPECT_ERRC(p.scatter(y, 1, Vector::Zero(3)), Errc::dimension_mismatch);
}

TEST(FullGradient, HalfNorm)
{
    const auto h = half_norm();
    Vector x(2);
    x << 1, 2;
    EXPECT_LT((full_gradient(h, x) - x).norm(), 1e-15);
}

TEST(FullGradient, ConstantFunctionHasZeroGradient)
{
    ObjectiveHandle h;
    h.partition = BlockPartition::contiguous({2, 1});
    h.smooth_value = [](const Vector&) { return 3.0; };
    h.block_gradient = [p = h.partition](const Vector&, std::size_t i) { return Vector::Zero(static_cast<Eigen::Index>(p.block_size(i))).eval(); };
    EXPECT_EQ(full_gradient(h, Vector::Ones(3)).norm(), 0.0);
}

TEST(FullGradient, QuadraticMatchesFiniteDifferences)
{
    const auto q = problems::make_quadratic(3, 8, 10);
    const auto h = q.handle();
    oracle::Gen g(7);
    for (int rep = 0; rep < 20; ++rep) {
        const Vector x = random_vector(g, 8);
        const auto fd = from_vec(oracle::finite_difference_gradient(
            [&](const oracle::Vec& z) { return h.smooth_value(from_vec(z)); }, oracle::to_vec(x)));
        const Vector an = full_gradient(h, x);
        EXPECT_LE((an - fd).norm(), 1e-5 * (1.0 + an.norm()));
    }
}

TEST(FullGradient, DimensionMismatch)
{
    EXPECT_ERRC(full_gradient(half_norm(), Vector::Zero(3)), Errc::dimension_mismatch);
    EXPECT_ERRC(composite_value(half_norm(), Vector::Zero(1)), Errc::dimension_mismatch);
}

TEST(CompositeValue, SmoothEqualsSmoothValue)
{
    const auto h = half_norm();
    Vector x(2);
    x << 3, -4;
    EXPECT_EQ(composite_value(h, x), h.smooth_value(x));
}

TEST(CompositeValue, L1ByHand)
{
    ObjectiveHandle h;
    h.partition = BlockPartition::contiguous({2, 2});
    h.smooth_value = [](const Vector&) { return 0.0; };
    h.terms = {terms::l1(1.0), terms::zero()};
    Vector x(4);
    x << -1, 2, 7, 7;
    EXPECT_EQ(composite_value(h, x), 3.0);
}

TEST(CompositeValue, LassoMatchesTermByTermSum)
{
    const auto c = problems::make_composite(5, 8, 0.7);
    const auto h = c.handle();
    oracle::Gen g(8);
    for (int rep = 0; rep < 10; ++rep) {
        const Vector x = random_vector(g, 8);
        double l1 = 0.0;
        for (int j = 0; j < 4; ++j) l1 += std::abs(x[j]);
        const Vector r = c.smooth.W * x - c.smooth.b;
        EXPECT_NEAR(composite_value(h, x), r.squaredNorm() + 0.7 * l1, 1e-12 * (1.0 + r.squaredNorm()));
    }
}

TEST(ExactBlockMin, ExplicitFormulaOnFourBlockSplit)
{
    // W = [A B; C D], b = (c; d): x ← (AᵀA+CᵀC)⁻¹[Aᵀ(c − By) + Cᵀ(d − Dy)]
    const auto q = problems::make_quadratic(11, 8, 50);
    const auto h = q.handle();
    const Matrix A = q.W.topLeftCorner(4, 4), B = q.W.topRightCorner(4, 4);
    const Matrix C = q.W.bottomLeftCorner(4, 4), D = q.W.bottomRightCorner(4, 4);
    const Vector c = q.b.head(4), d = q.b.tail(4);
    oracle::Gen g(9);
    const Vector z = random_vector(g, 8);
    const Vector y = z.tail(4);
    const Matrix lhs = A.transpose() * A + C.transpose() * C;
    const Vector rhs = A.transpose() * (c - B * y) + C.transpose() * (d - D * y);
    const Vector want = from_vec(oracle::solve(oracle::to_mat(lhs), oracle::to_vec(rhs)));
    const Vector got = exact_block_min(h, z, 0);
    EXPECT_LE((got.head(4) - want).norm(), 1e-10 * (1.0 + want.norm()));
    EXPECT_EQ((got.tail(4) - y).norm(), 0.0);
}

TEST(ExactBlockMin, IdentityZeroRhs)
{
    const auto q = problems::make_quadratic_from(Matrix::Identity(4, 4), Vector::Zero(4), BlockPartition::equal(4, 2));
    const Vector z = exact_block_min(q.handle(), Vector::Ones(4), 1);
    EXPECT_LT(z.tail(2).norm(), 1e-15);
    EXPECT_EQ(z.head(2), Vector::Ones(2));
}

TEST(ExactBlockMin, FourDimMatchesRestrictedSolve)
{
    oracle::Gen g(10);
    const Matrix W = random_matrix(g, 6, 4);
    const Vector b = random_vector(g, 6);
    const auto q = problems::make_quadratic_from(W, b, BlockPartition::equal(4, 2));
    const Vector x = random_vector(g, 4);
    const Vector z = exact_block_min(q.handle(), x, 1);
    // Restricted normal equations for block 1 with block 0 fixed.
    const Matrix W1 = W.rightCols(2), W0 = W.leftCols(2);
    const Vector want = from_vec(oracle::solve(oracle::to_mat(Matrix(W1.transpose() * W1)),
                                               oracle::to_vec(Vector(W1.transpose() * (b - W0 * x.head(2))))));
    EXPECT_LE((z.tail(2) - want).norm(), 1e-10);
}

TEST(ExactBlockMin, NoBlockSolver)
{
    EXPECT_ERRC(exact_block_min(half_norm(), Vector::Zero(2), 0), Errc::no_block_solver);
}

TEST(ExactBlockMin, ChangesOnlyBlockAndBeatsPerturbations)
{
    oracle::Gen g(12);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto c = problems::make_composite(seed, 8, 0.5);
        const auto h = c.handle();
        for (std::size_t i = 0; i < 2; ++i) {
            const Vector x = random_vector(g, 8);
            const Vector z = exact_block_min(h, x, i);
            const Vector other = h.partition.gather(x, 1 - i);
            EXPECT_EQ((h.partition.gather(z, 1 - i) - other).norm(), 0.0);
            const double fz = composite_value(h, z);
            for (int s = 0; s < 50; ++s) {
                Vector p = z;
                h.partition.scatter(p, i, h.partition.gather(z, i) + random_vector(g, 4, 0.1 * g.uniform(0.0, 1.0)));
                EXPECT_LE(fz, composite_value(h, p) + 1e-9);
            }
        }
    }
}

TEST(ExactBlockMin, Idempotent)
{
    oracle::Gen g(13);
    const auto q = problems::make_quadratic(4, 16, 100);
    const auto h = q.handle();
    const auto nl = problems::make_nonlinear_pl(4);
    const auto hn = nl.handle();
    for (int rep = 0; rep < 5; ++rep) {
        const Vector x = random_vector(g, 16);
        const Vector z = exact_block_min(h, x, 0);
        EXPECT_LE(std::abs(composite_value(h, exact_block_min(h, z, 0)) - composite_value(h, z)), 1e-12 * (1.0 + composite_value(h, z)));
        const Vector xn = random_vector(g, 20);
        const Vector zn = exact_block_min(hn, xn, 2);
        EXPECT_LE(std::abs(composite_value(hn, exact_block_min(hn, zn, 2)) - composite_value(hn, zn)), 1e-12 * (1.0 + composite_value(hn, zn)));
    }
}

TEST(Constants, TwoPointInequalitiesOnQuadratic)
{
    oracle::Gen g(14);
    for (std::uint64_t seed : {1u, 2u}) {
        const auto q = problems::make_quadratic(seed, 8, 1000);
        const auto h = q.handle();
        const double L = *h.constants.lipschitz, mu = *h.constants.strong_convexity;
        for (int rep = 0; rep < 100; ++rep) {
            const Vector x = random_vector(g, 8), y = random_vector(g, 8);
            const double lin = h.smooth_value(x) + full_gradient(h, x).dot(y - x);
            const double d2 = (y - x).squaredNorm();
            const double fy = h.smooth_value(y);
            const double slack = 1e-9 * (1.0 + std::abs(fy));
            EXPECT_GE(fy, lin + 0.5 * mu * d2 - slack);
            EXPECT_LE(fy, lin + 0.5 * L * d2 + slack);
        }
    }
}
