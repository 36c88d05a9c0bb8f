#pragma once
#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <altmin/error.hpp>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

namespace altmin {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double symmetry_tolerance = 1e-12;

inline bool all_finite(const Eigen::Ref<const Matrix>& m)
{
    return m.allFinite();
}

inline void require_finite(const Eigen::Ref<const Matrix>& m, const char* what)
{
    if (!m.allFinite()) fail(Errc::non_finite, std::string(what) + " has NaN or Inf entries");
}

/// Largest |m_ij - m_ji| relative to the largest |m_ij|.
inline double relative_asymmetry(const Eigen::Ref<const Matrix>& m)
{
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

inline void require_symmetric(const Eigen::Ref<const Matrix>& m)
{
    if (m.rows() != m.cols()) {
        fail(Errc::dimension_mismatch, "matrix is " + std::to_string(m.rows()) + "x"
                                           + std::to_string(m.cols()) + ", expected square");
    }
    if (relative_asymmetry(m) > symmetry_tolerance) {
        fail(Errc::not_symmetric, "relative asymmetry exceeds 1e-12");
    }
}

/// Lower-triangular Cholesky factor together with the matrix it came from.
struct SpdFactorization
{
    Matrix source;
    Matrix factor;

    std::size_t dim() const { return static_cast<std::size_t>(source.rows()); }
};

inline SpdFactorization cholesky(const Matrix& m)
{
    require_finite(m, "cholesky input");
    require_symmetric(m);

    const Eigen::Index n = m.rows();
    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = m(j, j);
        for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (!(pivot > 0.0)) {
            fail(Errc::not_spd, "non-positive pivot at column " + std::to_string(j));
        }
        const double d = std::sqrt(pivot);
        l(j, j) = d;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / d;
        }
    }
    return {m, std::move(l)};
}

/// Solves source * x = rhs by forward then backward substitution.
inline Vector solve_spd(const SpdFactorization& f, const Vector& rhs)
{
    const Eigen::Index n = f.factor.rows();
    if (rhs.size() != n) {
        fail(Errc::dimension_mismatch, "rhs has length " + std::to_string(rhs.size())
                                           + ", factorization has dimension " + std::to_string(n));
    }
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double s = rhs[i];
        for (Eigen::Index k = 0; k < i; ++k) s -= f.factor(i, k) * z[k];
        z[i] = s / f.factor(i, i);
    }
    Vector x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double s = z[i];
        for (Eigen::Index k = i + 1; k < n; ++k) s -= f.factor(k, i) * x[k];
        x[i] = s / f.factor(i, i);
    }
    return x;
}

struct SpectralExtremes
{
    double lambda_min;
    double lambda_max;
};

inline SpectralExtremes spectral_extremes(const Matrix& m)
{
    require_finite(m, "spectral_extremes input");
    require_symmetric(m);
    // Symmetrize explicitly; the solver only reads one triangle.
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

/// Returns the rows/cols of `m` selected by `idx` (both axes).
template <class Index>
Matrix principal_submatrix(const Matrix& m, const Index& idx)
{
    const auto k = static_cast<Eigen::Index>(idx.size());
    Matrix out(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            out(i, j) = m(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j]));
    return out;
}

}  // namespace altmin
