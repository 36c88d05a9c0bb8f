#pragma once
#include <altmin/line_search.hpp>
#include <altmin/objective.hpp>
#include <altmin/prox.hpp>
#include <altmin/trace.hpp>
#include <chrono>
#include <cmath>
#include <string>

namespace altmin {

/// ‖∇f(x)‖ for smooth objectives; otherwise the norm of the stacked
/// gradient mappings G^i_{M_i}(x) with M_i the declared block constants.
inline double optimality_residual(const ObjectiveHandle& h, const Vector& x)
{
    if (h.is_smooth()) return full_gradient(h, x).norm();
    double s = 0.0;
    for (std::size_t i = 0; i < h.num_blocks(); ++i) s += prox_map(h, x, i, default_step(h, i)).g_map.squaredNorm();
    return std::sqrt(s);
}

/// Block with the largest ‖∇_i f‖₂ for an already evaluated gradient; ties go
/// to the lowest index.
inline std::size_t greedy_block_from_gradient(const BlockPartition& p, const Vector& grad)
{
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t i = 0; i < p.num_blocks(); ++i) {
        const double nrm = p.gather(grad, i).squaredNorm();
        if (nrm > best_norm) {
            best = i;
            best_norm = nrm;
        }
    }
    return best;
}

inline std::size_t greedy_block(const ObjectiveHandle& h, const Vector& y)
{
    return greedy_block_from_gradient(h.partition, full_gradient(h, y));
}

/// Largest positive root of a²/((A+a)(τ+μa)) = 1/(Ln), i.e. of
/// (Ln − μ)a² − (τ + μA)a − Aτ = 0.
inline double choose_a_known_L(double A, double tau, double mu, double L, std::size_t n)
{
    if (!(A >= 0.0 && tau >= 1.0 && L > 0.0 && n >= 1 && mu >= 0.0)) {
        fail(Errc::invalid_argument, "choose_a_known_L needs A >= 0, tau >= 1, L > 0, n >= 1, mu >= 0");
    }
    const double lead = L * static_cast<double>(n) - mu;
    const double lin = tau + mu * A;
    if (!(lead > 0.0)) {
        // Linear equation −(τ + μA)a = Aτ has no positive solution.
        fail(Errc::no_positive_root, "mu >= L*n leaves no positive step coefficient");
    }
    const double a = (lin + std::sqrt(lin * lin + 4.0 * lead * A * tau)) / (2.0 * lead);
    if (!(a > 0.0) || !std::isfinite(a)) fail(Errc::no_positive_root, "known-L equation has no positive root");
    return a;
}

/// Largest positive root of
///   f(y) − a²G/(2(A+a)(τ+μa)) + μτa·s/(2(A+a)(τ+μa)) = f(x_next)
/// with G = ‖∇f(y)‖², s = ‖v − y‖². Clearing denominators leaves the quadratic
///   (2δμ − G)a² + (2δ(Aμ + τ) + μτs)a + 2δAτ = 0,  δ = f(y) − f(x_next).
inline double choose_a_adaptive(double f_y, double f_next, double grad_sq, double A, double tau, double mu, double v_minus_y_sq)
{
    const double delta = std::max(0.0, f_y - f_next);
    const double qa = 2.0 * delta * mu - grad_sq;
    const double qb = 2.0 * delta * (A * mu + tau) + mu * tau * v_minus_y_sq;
    const double qc = 2.0 * delta * A * tau;
    if (!(qa < 0.0)) fail(Errc::no_positive_root, "sufficient-decrease equation has no finite positive root");
    // qa < 0 ≤ qc: exactly one non-negative root.
    const double a = (qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (-2.0 * qa);
    if (!(a > 0.0) || !std::isfinite(a)) fail(Errc::no_positive_root, "no decrease from block minimization");
    return a;
}

inline double choose_a_adaptive(const ObjectiveHandle& h, const Vector& y, const Vector& x_next, double A, double tau, double mu, const Vector& v)
{
    const Vector g = full_gradient(h, y);
    return choose_a_adaptive(h.smooth_value(y), h.smooth_value(x_next), g.squaredNorm(), A, tau, mu, (v - y).squaredNorm());
}

namespace detail {

class Stopwatch
{
public:
    explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}

    double elapsed_ms() const
    {
        if (!enabled_) return 0.0;
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point start_;
};

inline Vector starting_point(const ObjectiveHandle& h, const SolverConfig& cfg)
{
    if (cfg.x0) {
        require_dim(h, *cfg.x0);
        return *cfg.x0;
    }
    return Vector::Zero(static_cast<Eigen::Index>(h.dim()));
}

inline bool reached_target(const ObjectiveHandle& h, const SolverConfig& cfg, double value)
{
    return cfg.target_gap && h.optimum && value - h.optimum->value <= *cfg.target_gap;
}

inline void require_smooth_unconstrained(const ObjectiveHandle& h, const char* who)
{
    if (!h.is_smooth() || !h.is_unconstrained()) {
        fail(Errc::non_smooth_unsupported, std::string(who) + " handles smooth unconstrained objectives only");
    }
}

}  // namespace detail

/// Cyclic exact block minimization over blocks 0, 1, ..., n−1, 0, ...
/// `max_iters` counts block minimizations.
inline SolverTrace run_am(const ObjectiveHandle& h, const SolverConfig& cfg)
{
    if (!h.block_argmin) fail(Errc::no_block_solver, "AM needs a block minimizer for every block");
    if (cfg.max_iters < 1) fail(Errc::invalid_argument, "max_iters must be at least 1");
    const std::size_t n = h.num_blocks();
    detail::Stopwatch clock(cfg.record_wall_time);

    SolverTrace trace;
    trace.method = Method::am;
    trace.num_blocks = n;
    trace.x0 = detail::starting_point(h, cfg);

    Vector x = trace.x0;
    auto record = [&](std::size_t k, std::optional<std::size_t> block) {
        IterationRecord r;
        r.k = k;
        r.f_value = h.smooth_value(x);
        r.composite_value = composite_value(h, x);
        r.grad_norm = optimality_residual(h, x);
        r.block = block;
        r.sweep_end = block && *block == n - 1;
        if (cfg.store_iterates) r.x = x;
        r.wall_ms = clock.elapsed_ms();
        trace.records.push_back(std::move(r));
    };
    record(0, std::nullopt);

    trace.status = Status::max_iters;
    for (std::size_t step = 0; step < cfg.max_iters; ++step) {
        const auto& prev = trace.records.back();
        if (detail::reached_target(h, cfg, prev.composite_value)) {
            trace.status = Status::target_gap;
            break;
        }
        if (prev.grad_norm <= cfg.grad_tolerance) {
            trace.status = Status::grad_tolerance;
            break;
        }
        const std::size_t i = step % n;
        x = exact_block_min(h, x, i);
        record(step + 1, i);
    }
    return trace;
}

/// Accelerated alternating minimization with exact line search, greedy block
/// choice and the estimating-sequence coefficients a_k, A_k, τ_k.
inline SolverTrace run_aam(const ObjectiveHandle& h, const SolverConfig& cfg)
{
    if (!h.block_argmin) fail(Errc::no_block_solver, "AAM needs a block minimizer for every block");
    detail::require_smooth_unconstrained(h, "AAM");
    if (cfg.max_iters < 1) fail(Errc::invalid_argument, "max_iters must be at least 1");
    if (!(cfg.mu_assumed >= 0.0)) fail(Errc::invalid_argument, "mu_assumed must be non-negative");
    const std::size_t n = h.num_blocks();
    const double mu = cfg.mu_assumed;
    detail::Stopwatch clock(cfg.record_wall_time);

    SolverTrace trace;
    trace.method = Method::aam;
    trace.num_blocks = n;
    trace.mu_assumed = mu;
    trace.momentum = cfg.momentum;
    trace.x0 = detail::starting_point(h, cfg);

    Vector x = trace.x0;
    Vector v = trace.x0;
    Vector psi_center = trace.x0;  // argmin ψ_k; differs from v only for the literal rule
    double A = 0.0;
    double tau = 1.0;
    double psi_min = 0.0;
    double fx = h.smooth_value(x);

    {
        IterationRecord r;
        r.k = 0;
        r.f_value = fx;
        r.composite_value = fx;
        r.grad_norm = full_gradient(h, x).norm();
        r.A = A;
        r.tau = tau;
        r.psi_min = psi_min;
        if (cfg.store_iterates) {
            r.x = x;
            r.v = v;
        }
        r.wall_ms = clock.elapsed_ms();
        trace.records.push_back(std::move(r));
    }

    trace.status = Status::max_iters;
    for (std::size_t k = 0; k < cfg.max_iters; ++k) {
        if (detail::reached_target(h, cfg, fx)) {
            trace.status = Status::target_gap;
            break;
        }
        auto ls = exact_line_search(h, x, v, cfg.line_search_tol);
        const Vector gy = full_gradient(h, ls.y);
        const double gnorm = gy.norm();
        if (gnorm <= cfg.grad_tolerance) {
            trace.status = Status::grad_tolerance;
            break;
        }
        const std::size_t i = greedy_block_from_gradient(h.partition, gy);
        Vector x_next = exact_block_min(h, ls.y, i);
        const double f_next = h.smooth_value(x_next);

        double a = 0.0;
        try {
            if (cfg.l_known) {
                a = choose_a_known_L(A, tau, mu, *cfg.l_known, n);
            } else {
                a = choose_a_adaptive(ls.value, f_next, gy.squaredNorm(), A, tau, mu, (v - ls.y).squaredNorm());
            }
        } catch (const Error& e) {
            if (e.code() != Errc::no_positive_root) throw;
            trace.status = Status::no_positive_root;
            break;
        }

        const double A_next = A + a;
        const double tau_next = tau + mu * a;
        const Vector center_next = (tau * psi_center + mu * a * ls.y - a * gy) / tau_next;
        // ψ_k(z) = ψ_k(center) + (τ_k/2)‖z − center‖² exactly, so the new minimum
        // follows from evaluating the updated model at its minimizer.
        psi_min += 0.5 * tau * (center_next - psi_center).squaredNorm()
                   + a * (ls.value + gy.dot(center_next - ls.y) + 0.5 * mu * (center_next - ls.y).squaredNorm());
        Vector v_next = cfg.momentum == MomentumRule::proof ? center_next : Vector(v - a * gy);

        x = std::move(x_next);
        v = std::move(v_next);
        psi_center = center_next;
        A = A_next;
        tau = tau_next;
        fx = f_next;

        IterationRecord r;
        r.k = k + 1;
        r.f_value = fx;
        r.composite_value = fx;
        r.grad_norm = full_gradient(h, x).norm();
        r.block = i;
        r.beta = ls.beta;
        r.a = a;
        r.A = A;
        r.tau = tau;
        r.f_y = ls.value;
        r.psi_min = psi_min;
        if (cfg.store_iterates) {
            r.x = x;
            r.v = v;
            r.y = ls.y;
            r.grad_y = gy;
        }
        r.wall_ms = clock.elapsed_ms();
        trace.records.push_back(std::move(r));
    }
    return trace;
}

/// Fast gradient method with constant step 1/L.
inline SolverTrace run_fgm(const ObjectiveHandle& h, const SolverConfig& cfg)
{
    detail::require_smooth_unconstrained(h, "FGM");
    if (cfg.max_iters < 1) fail(Errc::invalid_argument, "max_iters must be at least 1");
    const auto L = cfg.l_known ? cfg.l_known : h.constants.lipschitz;
    if (!L || !(*L > 0.0)) fail(Errc::missing_lipschitz, "FGM needs a Lipschitz constant");
    detail::Stopwatch clock(cfg.record_wall_time);

    SolverTrace trace;
    trace.method = Method::fgm;
    trace.num_blocks = h.num_blocks();
    trace.x0 = detail::starting_point(h, cfg);

    Vector z = trace.x0;
    Vector v = trace.x0;
    auto record = [&](std::size_t k, double fz) {
        IterationRecord r;
        r.k = k;
        r.f_value = fz;
        r.composite_value = fz;
        r.grad_norm = full_gradient(h, z).norm();
        if (cfg.store_iterates) {
            r.x = z;
            r.v = v;
        }
        r.wall_ms = clock.elapsed_ms();
        trace.records.push_back(std::move(r));
    };
    double fz = h.smooth_value(z);
    record(0, fz);

    trace.status = Status::max_iters;
    for (std::size_t k = 0; k < cfg.max_iters; ++k) {
        if (detail::reached_target(h, cfg, fz)) {
            trace.status = Status::target_gap;
            break;
        }
        const Vector g = full_gradient(h, v);
        if (g.norm() <= cfg.grad_tolerance) {
            trace.status = Status::grad_tolerance;
            break;
        }
        Vector z_next = v - g / *L;
        const double w = static_cast<double>(k) / static_cast<double>(k + 3);
        v = cfg.fgm_momentum == FgmMomentum::standard ? Vector(z_next + w * (z_next - z)) : Vector(z + w * (z_next - z));
        z = std::move(z_next);
        fz = h.smooth_value(z);
        record(k + 1, fz);
    }
    return trace;
}

}  // namespace altmin
