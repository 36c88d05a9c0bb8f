#pragma once
#include "oracles.hpp"
#include <altmin/altmin.hpp>
#include <gtest/gtest.h>

#define EXPECT_ERRC(stmt, errc)                                                  \
    do {                                                                         \
        try {                                                                    \
            stmt;                                                                \
            ADD_FAILURE() << "expected " << altmin::to_string(errc);             \
        } catch (const altmin::Error& e_) {                                      \
            EXPECT_EQ(e_.code(), errc) << e_.what();                             \
        }                                                                        \
    } while (0)

namespace testing_support {

using altmin::Matrix;
using altmin::Vector;

inline Vector random_vector(oracle::Gen& g, Eigen::Index n, double scale = 1.0)
{
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * g.normal();
    return v;
}

inline Matrix random_matrix(oracle::Gen& g, Eigen::Index r, Eigen::Index c)
{
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = g.normal();
    return m;
}

/// RᵀR + I for a random square R.
inline Matrix random_spd(oracle::Gen& g, Eigen::Index n)
{
    const Matrix r = random_matrix(g, n, n);
    Matrix m = r.transpose() * r;
    m = (0.5 * (m + m.transpose())).eval();
    m += Matrix::Identity(n, n);
    return m;
}

inline Vector from_vec(const oracle::Vec& v)
{
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

inline double rel_err(const Vector& a, const Vector& b)
{
    return (a - b).norm() / (1.0 + b.norm());
}

}  // namespace testing_support
