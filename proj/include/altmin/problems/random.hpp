#pragma once
#include <Eigen/QR>
#include <altmin/linalg.hpp>
#include <cstdint>
#include <random>

namespace altmin::problems {

using Rng = std::mt19937_64;

inline Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = nd(rng);
    return m;
}

inline Vector gaussian_vector(Rng& rng, Eigen::Index n)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = nd(rng);
    return v;
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q).
inline Matrix random_orthogonal(Rng& rng, Eigen::Index n)
{
    const Eigen::MatrixXd g = gaussian_matrix(rng, n, n);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    return q;
}

/// n values geometrically spaced from lo to hi (inclusive).
inline Vector geometric_spacing(double lo, double hi, Eigen::Index n)
{
    Vector s(n);
    if (n == 1) {
        s[0] = lo;
        return s;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        s[i] = lo * std::pow(hi / lo, t);
    }
    s[n - 1] = hi;
    return s;
}

}  // namespace altmin::problems
