#pragma once
#include <altmin/objective.hpp>
#include <altmin/prox.hpp>
#include <altmin/trace.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace altmin {

enum class BoundKind {
    am_linear_pl,
    am_sublinear,
    aam_main,
    aam_Ak_growth,
    aam_recurrence,
    aam_adaptive,
    nearly_pl_combined,
    sufficient_decrease,
    nonacc_max_bound,
    prox_pl,
};

inline std::string_view to_string(BoundKind k)
{
    switch (k) {
        case BoundKind::am_linear_pl: return "am_linear_pl";
        case BoundKind::am_sublinear: return "am_sublinear";
        case BoundKind::aam_main: return "aam_main";
        case BoundKind::aam_Ak_growth: return "aam_Ak_growth";
        case BoundKind::aam_recurrence: return "aam_recurrence";
        case BoundKind::aam_adaptive: return "aam_adaptive";
        case BoundKind::nearly_pl_combined: return "nearly_pl_combined";
        case BoundKind::sufficient_decrease: return "sufficient_decrease";
        case BoundKind::nonacc_max_bound: return "nonacc_max_bound";
        case BoundKind::prox_pl: return "prox_pl";
    }
    return "?";
}

inline std::optional<BoundKind> parse_bound_kind(std::string_view s)
{
    for (auto k : {BoundKind::am_linear_pl, BoundKind::am_sublinear, BoundKind::aam_main, BoundKind::aam_Ak_growth,
                   BoundKind::aam_recurrence, BoundKind::aam_adaptive, BoundKind::nearly_pl_combined,
                   BoundKind::sufficient_decrease, BoundKind::nonacc_max_bound, BoundKind::prox_pl}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

inline constexpr double warning_tolerance = 1e-10;

/// One inequality `measured ≤ bound` at iteration k. slack = bound − measured.
struct CertificateRow
{
    std::size_t k = 0;
    std::string label;
    double bound = 0.0;
    double measured = 0.0;
    double slack = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    bool warn = false;
};

struct CertificateReport
{
    BoundKind kind = BoundKind::aam_main;
    std::vector<CertificateRow> rows;
    double worst_slack = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> first_failure;
    std::size_t warnings = 0;

    bool passed() const { return !first_failure.has_value(); }

    /// Adds the row `measured ≤ bound` with tolerance rel·scale.
    void add(std::size_t k, std::string label, double bound, double measured, double scale, double rel = certificate_tolerance)
    {
        CertificateRow r;
        r.k = k;
        r.label = std::move(label);
        r.bound = bound;
        r.measured = measured;
        r.slack = bound - measured;
        r.tolerance = rel * scale;
        r.pass = r.slack >= -r.tolerance;
        if (std::isnan(r.slack)) r.pass = false;
        r.warn = r.pass && r.slack < -warning_tolerance * scale;
        if (r.warn) ++warnings;
        if (!r.pass && !first_failure) first_failure = k;
        if (!(r.slack >= worst_slack)) worst_slack = r.slack;
        rows.push_back(std::move(r));
    }
};

/// Constants a certificate may draw on. Absent values are unknown.
struct BoundSpec
{
    BoundKind kind = BoundKind::aam_main;
    std::vector<std::optional<double>> block_lipschitz;
    std::vector<std::optional<double>> block_strong_convexity;
    std::optional<double> lipschitz;
    std::optional<double> strong_convexity;
    std::optional<std::size_t> num_blocks;
    std::optional<double> radius;
    std::optional<double> f_star;

    /// Names of the constants `kind` needs that are missing; empty when complete.
    std::vector<std::string> missing() const
    {
        std::vector<std::string> out;
        auto need_blocks = [&](const std::vector<std::optional<double>>& v, const char* name) {
            if (v.size() < 2) {
                out.emplace_back(name);
                return;
            }
            for (const auto& x : v)
                if (!x) {
                    out.emplace_back(name);
                    return;
                }
        };
        switch (kind) {
            case BoundKind::am_linear_pl:
            case BoundKind::nearly_pl_combined:
            case BoundKind::prox_pl:
                need_blocks(block_lipschitz, "L_i");
                need_blocks(block_strong_convexity, "mu_i");
                break;
            case BoundKind::am_sublinear:
            case BoundKind::nonacc_max_bound:
                need_blocks(block_lipschitz, "L_i");
                if (!radius) out.emplace_back("R");
                break;
            case BoundKind::aam_main:
                if (!lipschitz) out.emplace_back("L");
                if (!num_blocks) out.emplace_back("n");
                if (!radius) out.emplace_back("R");
                break;
            case BoundKind::aam_Ak_growth:
                if (!lipschitz) out.emplace_back("L");
                if (!num_blocks) out.emplace_back("n");
                break;
            case BoundKind::aam_adaptive:
                if (!strong_convexity) out.emplace_back("mu");
                break;
            case BoundKind::sufficient_decrease:
                need_blocks(block_lipschitz, "L_i");
                break;
            case BoundKind::aam_recurrence: break;
        }
        if (!f_star && kind != BoundKind::aam_Ak_growth && kind != BoundKind::aam_recurrence
            && kind != BoundKind::sufficient_decrease) {
            out.emplace_back("F*");
        }
        return out;
    }

    void require_complete() const
    {
        const auto m = missing();
        if (m.empty()) return;
        std::string names;
        for (const auto& s : m) names += (names.empty() ? "" : ", ") + s;
        fail(Errc::missing_constants, std::string(to_string(kind)) + " needs " + names);
    }
};

namespace detail {

inline double gap_scale(double fstar)
{
    return 1.0 + std::abs(fstar);
}

inline void require_method(const SolverTrace& t, Method m, BoundKind kind)
{
    if (t.method != m) {
        fail(Errc::invalid_argument, std::string(to_string(kind)) + " applies to " + std::string(to_string(m)) + " traces");
    }
}

inline void require_two_blocks(const SolverTrace& t, BoundKind kind)
{
    if (t.num_blocks != 2) fail(Errc::invalid_argument, std::string(to_string(kind)) + " is stated for two blocks");
}

inline void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v)) fail(Errc::missing_constants, std::string(name) + " must be a positive number");
}

}  // namespace detail

/// (1 − μ₂/L₂)(1 − μ₁/L₁)
inline double am_linear_factor(double L1, double L2, double mu1, double mu2)
{
    return (1.0 - mu2 / L2) * (1.0 - mu1 / L1);
}

/// (1 − μ₂/(L₂+μ₂))(1 − μ₁/(L₁+μ₁))
inline double nearly_pl_factor(double L1, double L2, double mu1, double mu2)
{
    return (1.0 - mu2 / (L2 + mu2)) * (1.0 - mu1 / (L1 + mu1));
}

/// nLR²·min{4/k², (1 − √(μ/(nL)))^{k−1}}
inline double aam_main_bound(double L, double mu, std::size_t n, double R, std::size_t k)
{
    if (k < 1) fail(Errc::invalid_argument, "the bound starts at k = 1");
    const double nl = static_cast<double>(n) * L;
    if (!(mu >= 0.0 && mu < nl)) fail(Errc::invalid_argument, "need 0 <= mu < nL");
    const double kk = static_cast<double>(k);
    const double geometric = std::pow(1.0 - std::sqrt(mu / nl), kk - 1.0);
    return nl * R * R * std::min(4.0 / (kk * kk), geometric);
}

/// Lower bounds on A_k: k²/(4Ln) and, for μ > 0, (1/(nL))(1 − √(μ/(nL)))^{1−k}.
inline double aam_Ak_quadratic_bound(double L, std::size_t n, std::size_t k)
{
    const double kk = static_cast<double>(k);
    return kk * kk / (4.0 * L * static_cast<double>(n));
}

inline double aam_Ak_geometric_bound(double L, double mu, std::size_t n, std::size_t k)
{
    const double nl = static_cast<double>(n) * L;
    return std::pow(1.0 - std::sqrt(mu / nl), 1.0 - static_cast<double>(k)) / nl;
}

/// max{(f⁰ − f*)/2^{(N−1)/2}, 8·min(L₁,L₂)·R²/(N−1)} for N ≥ 2.
inline double am_sublinear_bound(double L1, double L2, double R, double initial_gap, std::size_t N)
{
    if (N < 2) fail(Errc::invalid_argument, "the bound needs N >= 2");
    const double nm1 = static_cast<double>(N) - 1.0;
    return std::max(initial_gap / std::pow(2.0, nm1 / 2.0), 8.0 * std::min(L1, L2) * R * R / nm1);
}

/// Per-sweep contraction F(x^{s+1}) − F* ≤ (1 − μ₂/L₂)(1 − μ₁/L₁)(F(x^s) − F*)
/// for two-block AM traces. The first sweep is skipped: the argument needs the
/// block not being minimized to be optimal already, which x⁰ need not be.
inline CertificateReport check_am_linear(const SolverTrace& trace, double L1, double L2, double mu1, double mu2, double fstar)
{
    detail::require_method(trace, Method::am, BoundKind::am_linear_pl);
    detail::require_two_blocks(trace, BoundKind::am_linear_pl);
    for (double v : {L1, L2, mu1, mu2}) detail::require_positive(v, "L_i and mu_i");
    const double factor = am_linear_factor(L1, L2, mu1, mu2);
    CertificateReport rep;
    rep.kind = BoundKind::am_linear_pl;
    const auto pts = trace.sweep_points();
    for (std::size_t s = 1; s + 1 < pts.size(); ++s) {
        const double before = pts[s]->composite_value - fstar;
        const double after = pts[s + 1]->composite_value - fstar;
        rep.add(pts[s + 1]->k, "sweep " + std::to_string(s + 1), factor * before, after, detail::gap_scale(fstar));
    }
    return rep;
}

/// Two-block AM under general convex constraints: each half-step satisfies
/// μ_i(F(after) − F*) ≤ L_i(F(before) − F(after)) and each sweep contracts
/// by (1 − μ₂/(L₂+μ₂))(1 − μ₁/(L₁+μ₁)). The first half-step and sweep are skipped.
inline CertificateReport check_nearly_pl(const SolverTrace& trace, double L1, double L2, double mu1, double mu2, double fstar)
{
    detail::require_method(trace, Method::am, BoundKind::nearly_pl_combined);
    detail::require_two_blocks(trace, BoundKind::nearly_pl_combined);
    for (double v : {L1, L2, mu1, mu2}) detail::require_positive(v, "L_i and mu_i");
    const double Ls[2] = {L1, L2};
    const double mus[2] = {mu1, mu2};
    const double scale = detail::gap_scale(fstar);
    CertificateReport rep;
    rep.kind = BoundKind::nearly_pl_combined;
    for (std::size_t j = 2; j < trace.records.size(); ++j) {
        const auto& before = trace.records[j - 1];
        const auto& after = trace.records[j];
        if (!after.block) continue;
        const std::size_t i = *after.block;
        const double lhs = mus[i] * (after.composite_value - fstar);
        const double rhs = Ls[i] * (before.composite_value - after.composite_value);
        rep.add(after.k, "half-step block " + std::to_string(i), rhs, lhs, Ls[i] * scale);
    }
    const double factor = nearly_pl_factor(L1, L2, mu1, mu2);
    const auto pts = trace.sweep_points();
    for (std::size_t s = 1; s + 1 < pts.size(); ++s) {
        const double before = pts[s]->composite_value - fstar;
        const double after = pts[s + 1]->composite_value - fstar;
        rep.add(pts[s + 1]->k, "sweep " + std::to_string(s + 1), factor * before, after, scale);
    }
    return rep;
}

/// f(x^N) − f* ≤ max{(f(x⁰) − f*)/2^{(N−1)/2}, 8 min(L₁,L₂) R²/(N−1)} where N
/// counts full sweeps and R bounds the distance from the initial level set
/// to the solution set.
inline CertificateReport check_am_sublinear(const SolverTrace& trace, double L1, double L2, double R, double f0, double fstar, BoundKind label = BoundKind::am_sublinear)
{
    detail::require_method(trace, Method::am, label);
    detail::require_positive(L1, "L_1");
    detail::require_positive(L2, "L_2");
    if (!(R >= 0.0)) fail(Errc::missing_constants, "R must be non-negative");
    CertificateReport rep;
    rep.kind = label;
    const auto pts = trace.sweep_points();
    for (std::size_t N = 2; N < pts.size(); ++N) {
        const double bound = am_sublinear_bound(L1, L2, R, f0 - fstar, N);
        rep.add(pts[N]->k, "sweep " + std::to_string(N), bound, pts[N]->composite_value - fstar, detail::gap_scale(fstar));
    }
    return rep;
}

inline CertificateReport check_nonacc_max_bound(const SolverTrace& trace, double L1, double L2, double R, double f0, double fstar)
{
    return check_am_sublinear(trace, L1, L2, R, f0, fstar, BoundKind::nonacc_max_bound);
}

/// f(x^k) − f* ≤ nLR²·min{4/k², (1 − √(μ/(nL)))^{k−1}} for k ≥ 1.
inline CertificateReport check_aam_main(const SolverTrace& trace, double L, double mu, std::size_t n, double R, double fstar)
{
    detail::require_method(trace, Method::aam, BoundKind::aam_main);
    detail::require_positive(L, "L");
    CertificateReport rep;
    rep.kind = BoundKind::aam_main;
    for (const auto& r : trace.records) {
        if (r.k < 1) continue;
        rep.add(r.k, "gap", aam_main_bound(L, mu, n, R, r.k), r.composite_value - fstar, detail::gap_scale(fstar));
    }
    return rep;
}

/// A_k ≥ k²/(4Ln), A₁ ≥ 1/(nL) and, for μ > 0, A_k ≥ (1/(nL))(1 − √(μ/(nL)))^{1−k}.
inline CertificateReport check_aam_Ak(const SolverTrace& trace, double L, double mu, std::size_t n)
{
    detail::require_method(trace, Method::aam, BoundKind::aam_Ak_growth);
    detail::require_positive(L, "L");
    CertificateReport rep;
    rep.kind = BoundKind::aam_Ak_growth;
    for (const auto& r : trace.records) {
        if (r.k < 1 || !r.A) continue;
        const double A = *r.A;
        // A_k ≥ bound  ⇔  bound − A_k ≤ 0; rows store measured = bound, bound = A_k.
        const double q = aam_Ak_quadratic_bound(L, n, r.k);
        rep.add(r.k, "quadratic", A, q, 1.0 + q);
        if (r.k == 1) {
            const double first = 1.0 / (static_cast<double>(n) * L);
            rep.add(r.k, "first", A, first, 1.0 + first);
        }
        if (mu > 0.0) {
            const double g = aam_Ak_geometric_bound(L, mu, n, r.k);
            rep.add(r.k, "geometric", A, g, 1.0 + g);
        }
    }
    return rep;
}

/// ψ_k(z) = ½‖z − x⁰‖² + Σ_{j=1..k} a_j [f(y^{j−1}) + ⟨∇f(y^{j−1}), z − y^{j−1}⟩ + (μ/2)‖z − y^{j−1}‖²]
/// evaluated term by term from the stored trace.
inline double psi_direct(const SolverTrace& trace, std::size_t k, const Vector& z)
{
    double v = 0.5 * (z - trace.x0).squaredNorm();
    for (std::size_t j = 1; j <= k; ++j) {
        const auto& r = trace.records.at(j);
        if (!r.a || !r.f_y || r.y.size() == 0 || r.grad_y.size() == 0) {
            fail(Errc::invalid_argument, "trace lacks the stored iterates needed for psi");
        }
        const Vector d = z - r.y;
        v += *r.a * (*r.f_y + r.grad_y.dot(d) + 0.5 * trace.mu_assumed * d.squaredNorm());
    }
    return v;
}

/// A_k f(x^k) ≤ ψ_k(v^k) with ψ_k evaluated from its definition.
inline CertificateReport check_aam_recurrence(const SolverTrace& trace, double rel_tol = 1e-7)
{
    detail::require_method(trace, Method::aam, BoundKind::aam_recurrence);
    CertificateReport rep;
    rep.kind = BoundKind::aam_recurrence;
    for (const auto& r : trace.records) {
        if (r.v.size() == 0 || !r.A) fail(Errc::invalid_argument, "trace lacks the stored iterates needed for psi");
        const double lhs = *r.A * r.f_value;
        const double psi = psi_direct(trace, r.k, r.v);
        rep.add(r.k, "psi", psi, lhs, 1.0 + std::abs(psi) + std::abs(lhs), rel_tol);
    }
    return rep;
}

/// f(x^k) − F* ≤ Π_{j=1..k}(1 − μ a_j²/A_j)·(f(x⁰) − F*) with μ the PL
/// constant of f (the trace itself may have been run with μ = 0).
inline CertificateReport check_aam_adaptive(const SolverTrace& trace, double mu_true, double fstar)
{
    detail::require_method(trace, Method::aam, BoundKind::aam_adaptive);
    if (!(mu_true >= 0.0)) fail(Errc::missing_constants, "mu must be non-negative");
    CertificateReport rep;
    rep.kind = BoundKind::aam_adaptive;
    const double gap0 = trace.records.front().composite_value - fstar;
    double product = 1.0;
    for (const auto& r : trace.records) {
        if (r.k < 1) continue;
        if (!r.a || !r.A) fail(Errc::invalid_argument, "trace lacks a_k and A_k");
        product *= 1.0 - mu_true * (*r.a) * (*r.a) / *r.A;
        rep.add(r.k, "gap", product * gap0, r.composite_value - fstar, detail::gap_scale(fstar));
    }
    return rep;
}

/// Along an AM trace: ‖G^i_{L_i}(before)‖² ≤ 2L_i(F(before) − F(after)) for
/// the block i minimized in each step.
inline CertificateReport check_sufficient_decrease(const SolverTrace& trace, const ObjectiveHandle& h)
{
    detail::require_method(trace, Method::am, BoundKind::sufficient_decrease);
    CertificateReport rep;
    rep.kind = BoundKind::sufficient_decrease;
    for (std::size_t j = 1; j < trace.records.size(); ++j) {
        const auto& before = trace.records[j - 1];
        const auto& after = trace.records[j];
        if (!after.block || before.x.size() == 0) continue;
        const std::size_t i = *after.block;
        const auto Li = h.block_lipschitz(i);
        if (!Li) fail(Errc::missing_constants, "sufficient_decrease needs L_" + std::to_string(i));
        const double g2 = prox_map(h, before.x, i, *Li).g_map.squaredNorm();
        const double rhs = 2.0 * *Li * (before.composite_value - after.composite_value);
        rep.add(after.k, "block " + std::to_string(i), rhs, g2, 1.0 + 2.0 * *Li * std::abs(before.composite_value));
    }
    return rep;
}

/// F* ≥ F(x) − D_i(x, μ_i)/(2μ_i) at every AM iterate x, with i the block
/// about to be minimized (every other block has just been made optimal).
/// x⁰ is skipped.
inline CertificateReport check_prox_pl_trace(const SolverTrace& trace, const ObjectiveHandle& h)
{
    detail::require_method(trace, Method::am, BoundKind::prox_pl);
    if (!h.optimum) fail(Errc::no_optimum, "prox_pl needs F*");
    const double fstar = h.optimum->value;
    CertificateReport rep;
    rep.kind = BoundKind::prox_pl;
    for (const auto& r : trace.records) {
        if (!r.block || r.x.size() == 0) continue;
        const std::size_t i = (*r.block + 1) % trace.num_blocks;
        const auto mu_i = h.block_strong_convexity(i);
        if (!mu_i) fail(Errc::missing_constants, "prox_pl needs mu_" + std::to_string(i));
        const auto c = prox_pl_certificate(h, r.x, i, *mu_i);
        // F* ≥ rhs  ⇔  rhs ≤ F*
        rep.add(r.k, "block " + std::to_string(i), c.lhs, c.rhs, detail::gap_scale(fstar));
    }
    return rep;
}

struct EmpiricalRate
{
    /// exp of the slope of log(gap) against k.
    double linear_factor = 0.0;
    /// slope of log(gap) against log(k).
    double sublinear_slope = 0.0;
    std::size_t points = 0;
};

/// Least-squares fits on gaps[k] for k in [k_min, k_max] whose value exceeds
/// `floor`. The log-log fit skips k = 0.
inline EmpiricalRate estimate_empirical_rate(const std::vector<double>& gaps, std::size_t k_min = 0,
                                             std::size_t k_max = std::numeric_limits<std::size_t>::max(), double floor = 1e-13)
{
    std::vector<double> ks, logk, logg;
    for (std::size_t k = k_min; k < gaps.size() && k <= k_max; ++k) {
        if (!(gaps[k] > floor)) continue;
        ks.push_back(static_cast<double>(k));
        logg.push_back(std::log(gaps[k]));
    }
    if (ks.size() < 10) fail(Errc::too_short, "rate fit needs at least 10 points above the noise floor");

    auto slope = [](const std::vector<double>& xs, const std::vector<double>& ys) {
        const double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            sx += xs[j];
            sy += ys[j];
        }
        const double mx = sx / n, my = sy / n;
        double sxy = 0, sxx = 0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            sxy += (xs[j] - mx) * (ys[j] - my);
            sxx += (xs[j] - mx) * (xs[j] - mx);
        }
        return sxy / sxx;
    };

    EmpiricalRate out;
    out.points = ks.size();
    out.linear_factor = std::exp(slope(ks, logg));
    std::vector<double> lx, ly;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        if (ks[j] < 1.0) continue;
        lx.push_back(std::log(ks[j]));
        ly.push_back(logg[j]);
    }
    out.sublinear_slope = lx.size() >= 2 ? slope(lx, ly) : std::numeric_limits<double>::quiet_NaN();
    return out;
}

inline EmpiricalRate estimate_empirical_rate(const SolverTrace& trace, double fstar, std::size_t k_min = 0,
                                             std::size_t k_max = std::numeric_limits<std::size_t>::max())
{
    std::vector<double> gaps;
    for (const auto& r : trace.records) {
        if (r.k != gaps.size()) fail(Errc::invalid_argument, "trace records are not indexed consecutively");
        gaps.push_back(r.composite_value - fstar);
    }
    return estimate_empirical_rate(gaps, k_min, k_max, 1e-13 * (1.0 + std::abs(fstar)));
}

}  // namespace altmin
