#include "helpers.hpp"

using namespace altmin;
using namespace testing_support;

namespace {

/// ‖Wx − b‖² + g on two blocks of two, with g_0 = ℓ1(1).
problems::CompositeQuadraticProblem small_l1(std::uint64_t seed)
{
    return problems::make_composite(seed, 4, 1.0);
}

SolverTrace am_trace(const ObjectiveHandle& h, std::size_t iters, std::uint64_t seed, double scale = 1.0)
{
    oracle::Gen g(seed);
    SolverConfig cfg;
    cfg.max_iters = iters;
    cfg.x0 = random_vector(g, static_cast<Eigen::Index>(h.dim()), scale);
    return run_am(h, cfg);
}

}  // namespace

TEST(ProxMap, SmoothCollapsesToGradient)
{
    const auto q = problems::make_quadratic(1, 8, 10);
    const auto h = q.handle();
    oracle::Gen g(1);
    for (int rep = 0; rep < 20; ++rep) {
        const Vector x = random_vector(g, 8);
        const double M = g.uniform(0.1, 10.0);
        for (std::size_t i = 0; i < 2; ++i) {
            const auto r = prox_map(h, x, i, M);
            const Vector grad = h.block_gradient(x, i);
            EXPECT_LE((r.t_point - (h.partition.gather(x, i) - grad / M)).norm(), 1e-12 * (1.0 + x.norm()));
            EXPECT_LE((r.g_map - grad).norm(), 1e-10 * (1.0 + grad.norm()));
            EXPECT_NEAR(r.d_value, grad.squaredNorm(), 1e-10 * (1.0 + grad.squaredNorm()));
        }
    }
}

TEST(ProxMap, ZeroGradient)
{
    const auto q = problems::make_quadratic(2, 8, 10);
    const auto h = q.handle();
    const auto r = prox_map(h, q.x_star, 1, 3.0);
    EXPECT_LE((r.t_point - q.partition.gather(q.x_star, 1)).norm(), 1e-12);
    EXPECT_LE(r.g_map.norm(), 1e-10);
    EXPECT_LE(r.d_value, 1e-20);
}

TEST(ProxMap, GMapIsScaledDifference)
{
    const auto c = small_l1(3);
    const auto h = c.handle();
    oracle::Gen g(3);
    const Vector x = random_vector(g, 4);
    const auto r = prox_map(h, x, 0, 2.5);
    EXPECT_EQ(r.g_map, (2.5 * (h.partition.gather(x, 0) - r.t_point)).eval());
}

TEST(ProxMap, L1MatchesSoftThresholdAndGridSearch)
{
    oracle::Gen g(4);
    for (std::uint64_t seed : {5u, 6u, 7u}) {
        const auto c = small_l1(seed);
        const auto h = c.handle();
        const Vector x = random_vector(g, 4);
        const double M = g.uniform(1.0, 5.0);
        const auto r = prox_map(h, x, 0, M);
        const Vector xi = h.partition.gather(x, 0);
        const Vector grad = h.block_gradient(x, 0);
        const Vector z = xi - grad / M;
        for (int j = 0; j < 2; ++j) {
            const double want = std::copysign(std::max(0.0, std::abs(z[j]) - 1.0 / M), z[j]);
            EXPECT_NEAR(r.t_point[j], want, 1e-14);
        }
        auto minimand = [&](double u0, double u1) {
            const double d0 = u0 - xi[0], d1 = u1 - xi[1];
            return std::abs(u0) + std::abs(u1) + 0.5 * M * (d0 * d0 + d1 * d1) + grad[0] * d0 + grad[1] * d1
                   - (std::abs(xi[0]) + std::abs(xi[1]));
        };
        const double step = 1e-4;
        const double best = oracle::grid_min_2d(minimand, r.t_point[0] - 0.05, r.t_point[0] + 0.05, r.t_point[1] - 0.05,
                                                r.t_point[1] + 0.05, step);
        EXPECT_NEAR(r.d_value, -2.0 * M * best, 2.0 * M * M * step * step + 1e-9);
        EXPECT_GE(r.d_value, 0.0);
    }
}

TEST(ProxMap, NoProxAndBadStep)
{
    auto h = problems::make_quadratic(1, 4, 10).handle();
    BlockTerm t;
    t.value = [](const Vector& v) { return v.norm(); };
    h.terms = {t, terms::zero()};
    EXPECT_ERRC(prox_map(h, Vector::Zero(4), 0, 1.0), Errc::no_prox);
    EXPECT_ERRC(prox_map(h, Vector::Zero(4), 1, 0.0), Errc::invalid_argument);
}

TEST(Stationarity, VanishesAfterBlockMinimization)
{
    for (std::uint64_t seed : {1u, 2u}) {
        const auto q = problems::make_quadratic(seed, 16, 100);
        const auto h = q.handle();
        const auto tr = am_trace(h, 20, seed);
        for (const auto& r : tr.records) {
            if (!r.block) continue;
            EXPECT_LE(stationarity_check(h, r.x, *r.block), stationarity_tolerance(h, r.x)) << "k=" << r.k;
        }
    }
}

TEST(Stationarity, CompositeAfterBlockMinimization)
{
    const auto c = problems::make_composite(9, 16, 0.5);
    const auto h = c.handle();
    const auto tr = am_trace(h, 20, 9);
    for (const auto& r : tr.records) {
        if (!r.block) continue;
        EXPECT_LE(stationarity_check(h, r.x, *r.block), stationarity_tolerance(h, r.x)) << "k=" << r.k;
    }
}

TEST(Stationarity, ZeroAtOptimumPositiveElsewhere)
{
    const auto q = problems::make_quadratic(42, 64, 100);
    const auto h = q.handle();
    for (std::size_t i = 0; i < 2; ++i) EXPECT_LE(stationarity_check(h, q.x_star, i), stationarity_tolerance(h, q.x_star));
    oracle::Gen g(42);
    const Vector x = random_vector(g, 64);
    EXPECT_GT(stationarity_check(h, x, 0), 1e-3);
    EXPECT_GT(stationarity_check(h, x, 1), 1e-3);
}

TEST(ProxPl, HoldsAlongQuadraticAmTrace)
{
    const auto q = problems::make_quadratic(42, 64, 100);
    const auto h = q.handle();
    const auto tr = am_trace(h, 40, 1);
    for (const auto& r : tr.records) {
        if (!r.block) continue;
        const std::size_t i = (*r.block + 1) % 2;
        const auto c = prox_pl_certificate(h, r.x, i, *h.block_strong_convexity(i));
        EXPECT_TRUE(c.pass) << "k=" << r.k << " slack=" << c.slack;
    }
}

TEST(ProxPl, HoldsAlongCompositeAmTrace)
{
    for (std::uint64_t seed : {7u, 8u}) {
        const auto c = problems::make_composite(seed, 16, 1.0);
        const auto h = c.handle();
        const auto tr = am_trace(h, 20, seed);
        int checked = 0;
        for (const auto& r : tr.records) {
            if (!r.block) continue;
            const std::size_t i = (*r.block + 1) % 2;
            const auto cert = prox_pl_certificate(h, r.x, i, *h.block_strong_convexity(i));
            EXPECT_TRUE(cert.pass) << "k=" << r.k << " slack=" << cert.slack;
            ++checked;
        }
        EXPECT_EQ(checked, 20);
    }
}

TEST(ProxPl, ZeroSlackAtOptimum)
{
    const auto q = problems::make_quadratic(3, 16, 100);
    const auto h = q.handle();
    const auto c = prox_pl_certificate(h, q.x_star, 0, *h.block_strong_convexity(0));
    EXPECT_NEAR(c.slack, 0.0, 1e-9);
    EXPECT_TRUE(c.pass);
}

TEST(ProxPl, Errors)
{
    auto h = problems::make_quadratic(3, 4, 10).handle();
    EXPECT_ERRC(prox_pl_certificate(h, Vector::Zero(4), 0, 0.0), Errc::invalid_argument);
    h.optimum.reset();
    EXPECT_ERRC(prox_pl_certificate(h, Vector::Zero(4), 0, 1.0), Errc::no_optimum);
}

TEST(DMonotonicity, SmoothIsConstantInStep)
{
    const auto q = problems::make_quadratic(4, 8, 10);
    const auto h = q.handle();
    oracle::Gen g(4);
    const Vector x = random_vector(g, 8);
    EXPECT_TRUE(d_monotonicity_check(h, x, 0, 0.5, 2.0));
    EXPECT_NEAR(decrease_functional(h, x, 0, 0.5), decrease_functional(h, x, 0, 2.0),
                1e-10 * (1.0 + decrease_functional(h, x, 0, 2.0)));
}

TEST(DMonotonicity, L1AtRandomPoints)
{
    oracle::Gen g(5);
    const auto c = problems::make_composite(5, 8, 1.0);
    const auto h = c.handle();
    for (int rep = 0; rep < 20; ++rep) {
        const Vector x = random_vector(g, 8);
        EXPECT_TRUE(d_monotonicity_check(h, x, 0, 0.5, 2.0));
        // Independent closed form: minimand at the soft-threshold point.
        for (double M : {0.5, 2.0}) {
            const Vector xi = h.partition.gather(x, 0), grad = h.block_gradient(x, 0);
            double d = 0.0;
            for (Eigen::Index j = 0; j < xi.size(); ++j) {
                const double z = xi[j] - grad[j] / M;
                const double t = std::copysign(std::max(0.0, std::abs(z) - 1.0 / M), z);
                const double u = t - xi[j];
                d += std::abs(t) - std::abs(xi[j]) + 0.5 * M * u * u + grad[j] * u;
            }
            EXPECT_NEAR(decrease_functional(h, x, 0, M), -2.0 * M * d, 1e-9 * (1.0 + std::abs(d)));
        }
    }
}

TEST(DMonotonicity, Preconditions)
{
    const auto c = problems::make_composite(5, 8, 1.0);
    EXPECT_ERRC(d_monotonicity_check(c.handle(), Vector::Zero(8), 0, 1.0, 1.0), Errc::invalid_argument);
    const auto b = problems::make_box_composite(5, 8, -0.3, 0.3);
    EXPECT_ERRC(d_monotonicity_check(b.handle(), Vector::Zero(8), 0, 0.5, 2.0), Errc::constrained_block);
}

TEST(DecreaseFunctional, NonNegativeAtFeasiblePoints)
{
    oracle::Gen g(6);
    const auto c = problems::make_composite(6, 8, 0.8);
    const auto b = problems::make_box_composite(6, 8, -0.3, 0.3);
    for (int rep = 0; rep < 50; ++rep) {
        const Vector x = random_vector(g, 8);
        const double M = g.uniform(0.1, 10.0);
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_GE(decrease_functional(c.handle(), x, i, M), -1e-12);
            const Vector xf = prox::project_box(x, -0.3, 0.3);
            EXPECT_GE(decrease_functional(b.handle(), xf, i, M), -1e-12);
        }
    }
}

TEST(SufficientDecrease, HoldsAlongAmTraces)
{
    const auto q = problems::make_quadratic(8, 16, 100);
    const auto c = problems::make_composite(8, 16, 0.5);
    const auto b = problems::make_box_composite(8, 16, -0.3, 0.3);
    for (const ObjectiveHandle& h : {q.handle(), c.handle(), b.handle()}) {
        // small start so the box instance begins feasible
        const auto tr = am_trace(h, 30, 8, 0.01);
        ASSERT_TRUE(std::isfinite(tr.records[0].composite_value));
        for (std::size_t k = 1; k < tr.records.size(); ++k) {
            const auto& before = tr.records[k - 1];
            const auto& after = tr.records[k];
            const std::size_t i = *after.block;
            const double Li = *h.block_lipschitz(i);
            const double gm = prox_map(h, before.x, i, Li).g_map.squaredNorm();
            EXPECT_LE(gm, 2.0 * Li * (before.composite_value - after.composite_value) + 1e-8) << h.name << " k=" << k;
        }
    }
}
