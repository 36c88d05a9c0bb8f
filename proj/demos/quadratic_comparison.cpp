// Runs AM, AAM (mu = 0 and mu = mu*) and FGM on one seeded quadratic and
// prints the objective gap every few iterations.
//
//   altmin_demo [dim] [cond] [iterations]
#include <altmin/altmin.hpp>
#include <cstdio>
#include <cstdlib>
#include <string>

using namespace altmin;

int main(int argc, char** argv)
{
    const std::size_t dim = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 64;
    const double cond = argc > 2 ? std::strtod(argv[2], nullptr) : 100.0;
    const std::size_t iters = argc > 3 ? std::strtoul(argv[3], nullptr, 10) : 200;

    try {
        const auto q = problems::make_quadratic(42, dim, cond);
        const auto h = q.handle();
        const double L = *h.constants.lipschitz, mu = *h.constants.strong_convexity;
        std::printf("quadratic dim=%zu cond=%g  L=%.4g  mu=%.4g  F*=%.6g\n\n", dim, cond, L, mu, q.f_star);

        SolverConfig cfg;
        cfg.max_iters = iters;
        cfg.l_known = L;
        cfg.store_iterates = false;
        const auto am = run_am(h, cfg);
        const auto aam0 = run_aam(h, cfg);
        cfg.mu_assumed = mu;
        const auto aams = run_aam(h, cfg);
        const auto fgm = run_fgm(h, cfg);

        auto gap = [&](const SolverTrace& t, std::size_t k) {
            const auto& r = k < t.records.size() ? t.records[k] : t.last();
            return r.composite_value - q.f_star;
        };
        std::printf("%6s %12s %12s %12s %12s\n", "k", "AM", "AAM(0)", "AAM(mu*)", "FGM");
        const std::size_t stride = iters >= 10 ? iters / 10 : 1;
        for (std::size_t k = 0; k <= iters; k += stride) {
            std::printf("%6zu %12.4e %12.4e %12.4e %12.4e\n", k, gap(am, k), gap(aam0, k), gap(aams, k), gap(fgm, k));
        }

        const auto rate = estimate_empirical_rate(aams, q.f_star, 1, iters);
        std::printf("\nAAM(mu*) fitted linear factor %.4f, reference 1 - sqrt(mu/(2L)) = %.4f\n", rate.linear_factor,
                    1.0 - std::sqrt(mu / (2.0 * L)));
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
    return 0;
}
