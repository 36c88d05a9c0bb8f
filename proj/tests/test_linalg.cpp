#include "helpers.hpp"

using namespace altmin;
using namespace testing_support;

TEST(Cholesky, IdentityFactorIsIdentity)
{
    const auto f = cholesky(Matrix::Identity(3, 3));
    EXPECT_LT((f.factor - Matrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(Cholesky, DiagonalFactor)
{
    Matrix m(2, 2);
    m << 4, 0, 0, 9;
    const auto f = cholesky(m);
    Matrix want(2, 2);
    want << 2, 0, 0, 3;
    EXPECT_LT((f.factor - want).norm(), 1e-15);
}

TEST(Cholesky, RandomReconstruction)
{
    oracle::Gen g(1);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix m = random_spd(g, 5);
        const auto f = cholesky(m);
        EXPECT_LE((f.factor * f.factor.transpose() - m).norm() / m.norm(), 1e-10);
        for (Eigen::Index i = 0; i < 5; ++i)
            for (Eigen::Index j = i + 1; j < 5; ++j) EXPECT_EQ(f.factor(i, j), 0.0);
    }
}

TEST(Cholesky, RejectsIndefinite)
{
    Matrix m(2, 2);
    m << 1, 2, 2, 1;
    EXPECT_ERRC(cholesky(m), Errc::not_spd);
    EXPECT_ERRC(cholesky(Matrix::Zero(2, 2)), Errc::not_spd);
}

TEST(Cholesky, RejectsAsymmetric)
{
    Matrix m(2, 2);
    m << 2, 1, 1 + 1e-9, 2;
    EXPECT_ERRC(cholesky(m), Errc::not_symmetric);
}

TEST(SolveSpd, Identity)
{
    Vector rhs(3);
    rhs << 1, 2, 3;
    EXPECT_LT((solve_spd(cholesky(Matrix::Identity(3, 3)), rhs) - rhs).norm(), 1e-15);
}

TEST(SolveSpd, Diagonal)
{
    Matrix m(2, 2);
    m << 2, 0, 0, 4;
    Vector rhs(2);
    rhs << 2, 4;
    const Vector x = solve_spd(cholesky(m), rhs);
    EXPECT_NEAR(x[0], 1.0, 1e-15);
    EXPECT_NEAR(x[1], 1.0, 1e-15);
}

TEST(SolveSpd, MatchesGaussianElimination)
{
    oracle::Gen g(2);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix m = random_spd(g, 6);
        const Vector rhs = random_vector(g, 6);
        const Vector x = solve_spd(cholesky(m), rhs);
        const Vector want = from_vec(oracle::solve(oracle::to_mat(m), oracle::to_vec(rhs)));
        EXPECT_LE((m * x - rhs).norm(), 1e-9 * (1.0 + rhs.norm()));
        EXPECT_LE(rel_err(x, want), 1e-10);
    }
}

TEST(SolveSpd, DimensionMismatch)
{
    EXPECT_ERRC(solve_spd(cholesky(Matrix::Identity(3, 3)), Vector::Ones(2)), Errc::dimension_mismatch);
}

TEST(SolveSpd, PropertyResidualAcrossSizes)
{
    oracle::Gen g(3);
    for (int rep = 0; rep < 50; ++rep) {
        const auto n = static_cast<Eigen::Index>(1 + g.index(30));
        const Matrix m = random_spd(g, n);
        const Vector b = random_vector(g, n);
        EXPECT_LE((m * solve_spd(cholesky(m), b) - b).norm(), 1e-9 * (1.0 + b.norm()));
    }
}

TEST(SpectralExtremes, Diagonal)
{
    Matrix m(2, 2);
    m << 1, 0, 0, 5;
    const auto e = spectral_extremes(m);
    EXPECT_NEAR(e.lambda_min, 1.0, 1e-12);
    EXPECT_NEAR(e.lambda_max, 5.0, 1e-12);
}

TEST(SpectralExtremes, Identity)
{
    const auto e = spectral_extremes(Matrix::Identity(7, 7));
    EXPECT_NEAR(e.lambda_min, 1.0, 1e-12);
    EXPECT_NEAR(e.lambda_max, 1.0, 1e-12);
}

TEST(SpectralExtremes, MatchesJacobiOracle)
{
    oracle::Gen g(4);
    for (int rep = 0; rep < 20; ++rep) {
        Matrix m = random_matrix(g, 4, 4);
        m = (0.5 * (m + m.transpose())).eval();
        const auto e = spectral_extremes(m);
        const auto o = oracle::jacobi_eigen(oracle::to_mat(m));
        const double scale = std::max(std::abs(o.values.front()), std::abs(o.values.back()));
        EXPECT_NEAR(e.lambda_min, o.values.front(), 1e-8 * scale);
        EXPECT_NEAR(e.lambda_max, o.values.back(), 1e-8 * scale);
    }
}

TEST(SpectralExtremes, RejectsAsymmetric)
{
    Matrix m(2, 2);
    m << 1, 2, 0, 1;
    EXPECT_ERRC(spectral_extremes(m), Errc::not_symmetric);
}

TEST(SpectralExtremes, BracketsRayleighQuotients)
{
    oracle::Gen g(5);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix m = random_matrix(g, 8, 8);
        m = (0.5 * (m + m.transpose())).eval();
        const auto e = spectral_extremes(m);
        for (int s = 0; s < 100; ++s) {
            const Vector v = random_vector(g, 8);
            const double q = v.dot(m * v) / v.squaredNorm();
            EXPECT_GE(q, e.lambda_min - 1e-10);
            EXPECT_LE(q, e.lambda_max + 1e-10);
        }
    }
}

TEST(Linalg, RejectsNonFinite)
{
    Matrix m = Matrix::Identity(2, 2);
    m(0, 0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_ERRC(cholesky(m), Errc::non_finite);
}
