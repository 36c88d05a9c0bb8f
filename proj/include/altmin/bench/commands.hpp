#pragma once
#include <altmin/bench/config.hpp>
#include <altmin/bench/instance.hpp>
#include <altmin/bench/trace_csv.hpp>
#include <altmin/certificates.hpp>
#include <altmin/solvers.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

namespace altmin::bench {

enum ExitCode : int { exit_pass = 0, exit_violation = 1, exit_input_error = 2, exit_solver_error = 3 };

inline constexpr const char* output_dir_env = "ALTMIN_OUTPUT_DIR";

struct ResolvedSolver
{
    SolverSpec spec;
    SolverConfig config;
};

inline ResolvedSolver resolve_solver(const SolverSpec& s, const BuiltInstance& inst, bool wall_time)
{
    ResolvedSolver r;
    r.spec = s;
    auto& c = r.config;
    c.max_iters = s.max_iters;
    c.target_gap = s.target_gap;
    c.grad_tolerance = s.grad_tolerance;
    c.line_search_tol = s.line_search_tol;
    c.momentum = s.momentum;
    c.fgm_momentum = s.fgm_momentum;
    c.record_wall_time = wall_time;
    if (s.mu.use_declared) {
        if (!inst.mu_star) detail::config_fail("solver '" + s.label + "': mu_star requested but the instance declares no strong convexity");
        c.mu_assumed = *inst.mu_star;
    } else {
        c.mu_assumed = s.mu.value;
    }
    switch (s.lipschitz.mode) {
        case LipschitzSetting::Mode::known:
            if (s.method != Method::am) {
                if (!inst.handle.constants.lipschitz) {
                    detail::config_fail("solver '" + s.label + "': lipschitz = known but the instance declares no L");
                }
                c.l_known = inst.handle.constants.lipschitz;
            }
            break;
        case LipschitzSetting::Mode::unknown:
            if (s.method == Method::fgm) detail::config_fail("solver '" + s.label + "': FGM needs a Lipschitz constant");
            break;
        case LipschitzSetting::Mode::value: c.l_known = s.lipschitz.value; break;
    }
    return r;
}

inline SolverTrace run_solver(const BuiltInstance& inst, const ResolvedSolver& s)
{
    switch (s.spec.method) {
        case Method::am: return run_am(inst.handle, s.config);
        case Method::aam: return run_aam(inst.handle, s.config);
        case Method::fgm: return run_fgm(inst.handle, s.config);
    }
    fail(Errc::invalid_argument, "unknown method");
}

inline double f_star(const BuiltInstance& inst)
{
    return inst.handle.optimum->value;
}

/// Per-record rows plus the two bound columns.
inline std::vector<TraceRow> trace_rows(const BuiltInstance& inst, const ResolvedSolver& s, const SolverTrace& t, bool wall_time)
{
    const double fs = f_star(inst);
    const auto& h = inst.handle;
    std::vector<TraceRow> rows;
    std::optional<double> am_factor;
    if (t.method == Method::am && h.num_blocks() == 2 && h.is_unconstrained()) {
        const auto L1 = h.block_lipschitz(0), L2 = h.block_lipschitz(1);
        const auto m1 = h.block_strong_convexity(0), m2 = h.block_strong_convexity(1);
        if (L1 && L2 && m1 && m2) am_factor = am_linear_factor(*L1, *L2, *m1, *m2);
    }
    const auto L = h.constants.lipschitz;
    const bool main_bound = t.method == Method::aam && L && t.mu_assumed < static_cast<double>(h.num_blocks()) * *L;

    std::size_t sweeps = 0;
    double previous_sweep_gap = 0.0;
    for (const auto& r : t.records) {
        TraceRow row;
        row.k = r.k;
        row.solver = s.spec.label;
        row.f_gap = r.composite_value - fs;
        row.grad_norm = r.grad_norm;
        row.block = r.block;
        row.beta = r.beta;
        row.a = r.a;
        row.A = r.A;
        row.tau = r.tau;
        if (main_bound && r.k >= 1) row.bound_aam_main = aam_main_bound(*L, t.mu_assumed, h.num_blocks(), inst.distance_to_optimum, r.k);
        if (t.method == Method::am && (r.k == 0 || r.sweep_end)) {
            if (am_factor && sweeps >= 2) row.bound_am_linear = *am_factor * previous_sweep_gap;
            previous_sweep_gap = row.f_gap;
            ++sweeps;
        }
        if (wall_time) row.wall_ms = r.wall_ms;
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Rebuilds the scalar part of a trace from CSV rows of one solver.
inline SolverTrace trace_from_rows(const std::vector<TraceRow>& rows, const BuiltInstance& inst, const ResolvedSolver& s)
{
    SolverTrace t;
    t.method = s.spec.method;
    t.num_blocks = inst.handle.num_blocks();
    t.mu_assumed = s.config.mu_assumed;
    t.momentum = s.config.momentum;
    const double fs = f_star(inst);
    for (const auto& row : rows) {
        if (row.solver != s.spec.label) continue;
        IterationRecord r;
        r.k = row.k;
        r.composite_value = row.f_gap + fs;
        r.f_value = r.composite_value;
        r.grad_norm = row.grad_norm;
        r.block = row.block;
        r.sweep_end = t.method == Method::am && row.block && *row.block + 1 == t.num_blocks;
        r.beta = row.beta;
        r.a = row.a;
        r.A = row.A;
        r.tau = row.tau;
        t.records.push_back(std::move(r));
    }
    return t;
}

struct CertificateOutcome
{
    std::string solver;
    BoundKind kind = BoundKind::aam_main;
    /// pass, fail, skipped: missing constants, or not applicable
    std::string status;
    std::string detail;
    std::optional<CertificateReport> report;
};

/// Evaluates one certificate for one solver. `scalar` carries the values
/// recorded in the trace file; `full` re-runs the solver when iterates are needed.
inline CertificateOutcome evaluate_certificate(BoundKind kind, const BuiltInstance& inst, const ResolvedSolver& s,
                                               const SolverTrace& scalar, const std::function<const SolverTrace&()>& full)
{
    CertificateOutcome out;
    out.solver = s.spec.label;
    out.kind = kind;
    const auto& h = inst.handle;
    const std::size_t n = h.num_blocks();
    auto not_applicable = [&](std::string why) {
        out.status = "not applicable";
        out.detail = std::move(why);
        return out;
    };

    BoundSpec spec;
    spec.kind = kind;
    for (std::size_t i = 0; i < n; ++i) {
        spec.block_lipschitz.push_back(h.block_lipschitz(i));
        spec.block_strong_convexity.push_back(h.block_strong_convexity(i));
    }
    spec.lipschitz = h.constants.lipschitz;
    spec.strong_convexity = h.constants.pl;
    spec.num_blocks = n;
    spec.f_star = f_star(inst);
    const bool am_like = kind == BoundKind::am_linear_pl || kind == BoundKind::nearly_pl_combined || kind == BoundKind::am_sublinear
                         || kind == BoundKind::nonacc_max_bound || kind == BoundKind::sufficient_decrease || kind == BoundKind::prox_pl;
    if (am_like) {
        if (s.spec.method != Method::am) return not_applicable("AM-only certificate");
        if ((kind == BoundKind::am_sublinear || kind == BoundKind::nonacc_max_bound)) {
            spec.radius = inst.level_set_radius;
            if (!h.is_smooth()) return not_applicable("needs a smooth objective");
        }
        if (kind == BoundKind::am_linear_pl && !h.is_unconstrained()) return not_applicable("constrained blocks");
        if (kind != BoundKind::sufficient_decrease && kind != BoundKind::prox_pl && n != 2) return not_applicable("stated for two blocks");
    } else {
        if (s.spec.method != Method::aam) return not_applicable("AAM-only certificate");
        spec.radius = inst.distance_to_optimum;
        if (kind == BoundKind::aam_adaptive && s.config.mu_assumed != 0.0) return not_applicable("needs mu_assumed = 0");
    }
    if (!spec.missing().empty()) {
        out.status = "skipped: missing constants";
        for (const auto& m : spec.missing()) out.detail += (out.detail.empty() ? "" : ", ") + m;
        return out;
    }

    const double fs = *spec.f_star;
    auto bl = [&](std::size_t i) { return *spec.block_lipschitz[i]; };
    auto bm = [&](std::size_t i) { return *spec.block_strong_convexity[i]; };
    switch (kind) {
        case BoundKind::am_linear_pl: out.report = check_am_linear(scalar, bl(0), bl(1), bm(0), bm(1), fs); break;
        case BoundKind::nearly_pl_combined: out.report = check_nearly_pl(scalar, bl(0), bl(1), bm(0), bm(1), fs); break;
        case BoundKind::am_sublinear:
            out.report = check_am_sublinear(scalar, bl(0), bl(1), *spec.radius, scalar.records.front().composite_value, fs);
            break;
        case BoundKind::nonacc_max_bound:
            out.report = check_nonacc_max_bound(scalar, bl(0), bl(1), *spec.radius, scalar.records.front().composite_value, fs);
            break;
        case BoundKind::sufficient_decrease: out.report = check_sufficient_decrease(full(), h); break;
        case BoundKind::prox_pl: out.report = check_prox_pl_trace(full(), h); break;
        case BoundKind::aam_main: out.report = check_aam_main(scalar, *spec.lipschitz, s.config.mu_assumed, n, *spec.radius, fs); break;
        case BoundKind::aam_Ak_growth: out.report = check_aam_Ak(scalar, *spec.lipschitz, s.config.mu_assumed, n); break;
        case BoundKind::aam_recurrence: out.report = check_aam_recurrence(full()); break;
        case BoundKind::aam_adaptive: out.report = check_aam_adaptive(scalar, *spec.strong_convexity, fs); break;
    }
    out.status = out.report->passed() ? "pass" : "fail";
    return out;
}

namespace detail {

inline std::filesystem::path output_dir(const RunConfig& cfg, const std::optional<std::string>& cli_out)
{
    if (cli_out) return *cli_out;
    if (const char* env = std::getenv(output_dir_env); env && *env) return env;
    return cfg.output.dir;
}

inline void ensure_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) config_fail("cannot create output directory '" + dir.string() + "'");
}

inline void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) config_fail("cannot write output file '" + path.string() + "'");
    out << content;
    if (!out) config_fail("cannot write output file '" + path.string() + "'");
}

inline std::vector<ResolvedSolver> resolve_all(const RunConfig& cfg, const BuiltInstance& inst)
{
    if (cfg.solvers.empty()) config_fail("config lists no solvers");
    std::vector<ResolvedSolver> out;
    for (const auto& s : cfg.solvers) out.push_back(resolve_solver(s, inst, cfg.output.wall_time));
    return out;
}

}  // namespace detail

struct RunResult
{
    std::filesystem::path trace_path;
    std::filesystem::path summary_path;
    std::vector<TraceRow> rows;
    nlohmann::ordered_json summary;
};

/// Runs every configured solver and writes the trace CSV and the summary JSON.
inline RunResult cmd_run(const RunConfig& cfg, const std::optional<std::string>& out_dir = std::nullopt)
{
    const auto dir = detail::output_dir(cfg, out_dir);
    detail::ensure_dir(dir);
    const auto inst = build_instance(cfg.instance);
    const auto solvers = detail::resolve_all(cfg, inst);

    RunResult res;
    res.summary["instance"] = describe(cfg.instance);
    res.summary["runs"] = nlohmann::ordered_json::array();
    for (const auto& s : solvers) {
        const auto t = run_solver(inst, s);
        auto rows = trace_rows(inst, s, t, cfg.output.wall_time);
        nlohmann::ordered_json run;
        run["instance"] = describe(cfg.instance);
        run["solver"] = s.spec.label;
        run["method"] = std::string(to_string(s.spec.method));
        run["final_gap"] = rows.back().f_gap;
        run["iterations"] = t.last().k;
        run["status"] = std::string(to_string(t.status));
        res.summary["runs"].push_back(std::move(run));
        res.rows.insert(res.rows.end(), rows.begin(), rows.end());
    }
    sort_rows(res.rows);
    res.trace_path = dir / cfg.output.trace;
    res.summary_path = dir / cfg.output.summary;
    detail::write_file(res.trace_path, write_trace_csv(res.rows));
    detail::write_file(res.summary_path, res.summary.dump(2) + "\n");
    return res;
}

struct VerifyResult
{
    nlohmann::ordered_json report;
    std::vector<CertificateOutcome> outcomes;
    int exit_code = exit_pass;
};

/// Checks every configured certificate against the trace file. Scalar
/// certificates read the recorded values; certificates that need iterates
/// re-run the (deterministic) solver.
inline VerifyResult cmd_verify(const std::vector<TraceRow>& rows, const RunConfig& cfg, bool strict)
{
    const auto inst = build_instance(cfg.instance);
    const auto solvers = detail::resolve_all(cfg, inst);
    for (const auto& row : rows) {
        bool known = false;
        for (const auto& s : solvers) known = known || s.spec.label == row.solver;
        if (!known) fail(Errc::trace_parse_error, "trace mentions solver '" + row.solver + "' absent from the config");
    }

    VerifyResult res;
    std::size_t violations = 0, skipped = 0;
    for (const auto& s : solvers) {
        const SolverTrace scalar = trace_from_rows(rows, inst, s);
        if (scalar.records.empty()) fail(Errc::trace_parse_error, "trace has no rows for solver '" + s.spec.label + "'");
        std::optional<SolverTrace> full;
        auto get_full = [&]() -> const SolverTrace& {
            if (!full) full = run_solver(inst, s);
            return *full;
        };
        for (auto kind : cfg.certificates) {
            auto o = evaluate_certificate(kind, inst, s, scalar, get_full);
            if (o.status == "fail") ++violations;
            if (o.status.rfind("skipped", 0) == 0) ++skipped;
            res.outcomes.push_back(std::move(o));
        }
    }

    auto& j = res.report;
    j["instance"] = describe(cfg.instance);
    j["certificates"] = nlohmann::ordered_json::array();
    for (const auto& o : res.outcomes) {
        nlohmann::ordered_json e;
        e["solver"] = o.solver;
        e["certificate"] = std::string(to_string(o.kind));
        e["status"] = o.status;
        if (!o.detail.empty()) e["detail"] = o.detail;
        if (o.report) {
            e["rows"] = o.report->rows.size();
            e["worst_slack"] = o.report->rows.empty() ? 0.0 : o.report->worst_slack;
            e["warnings"] = o.report->warnings;
            if (o.report->first_failure) {
                e["first_failure_k"] = *o.report->first_failure;
                auto fails = nlohmann::ordered_json::array();
                for (const auto& r : o.report->rows) {
                    if (r.pass) continue;
                    fails.push_back({{"k", r.k}, {"label", r.label}, {"bound", r.bound}, {"measured", r.measured}, {"slack", r.slack}});
                    if (fails.size() >= 20) break;
                }
                e["violations"] = std::move(fails);
            }
        }
        j["certificates"].push_back(std::move(e));
    }
    j["violations"] = violations;
    j["skipped"] = skipped;
    j["strict"] = strict;
    const bool ok = violations == 0 && !(strict && skipped > 0);
    j["passed"] = ok;
    res.exit_code = ok ? exit_pass : exit_violation;
    return res;
}

/// f_gap against k for AM, AAM(μ = 0), AAM(μ = μ*) and FGM on a quadratic
/// instance, known L. Runs that stop early are padded with their last gap.
inline std::string cmd_figure(const RunConfig& cfg)
{
    if (cfg.instance.kind != InstanceKind::quadratic) detail::config_fail("figure needs a quadratic instance");
    const auto inst = build_instance(cfg.instance);
    if (!inst.mu_star) detail::config_fail("figure needs a strongly convex instance");
    const std::size_t K = cfg.figure_iterations;
    if (K < 1) detail::config_fail("[figure] iterations must be at least 1");
    const double fs = f_star(inst);

    auto gaps = [&](Method m, double mu) {
        SolverConfig c;
        c.max_iters = K;
        c.mu_assumed = mu;
        c.l_known = inst.handle.constants.lipschitz;
        c.store_iterates = false;
        SolverTrace t;
        if (m == Method::am) t = run_am(inst.handle, c);
        else if (m == Method::aam) t = run_aam(inst.handle, c);
        else t = run_fgm(inst.handle, c);
        std::vector<double> g;
        for (const auto& r : t.records) g.push_back(r.composite_value - fs);
        while (g.size() < K + 1) g.push_back(g.back());
        return g;
    };
    const auto am = gaps(Method::am, 0.0);
    const auto aam0 = gaps(Method::aam, 0.0);
    const auto aams = gaps(Method::aam, *inst.mu_star);
    const auto fgm = gaps(Method::fgm, 0.0);
    std::string out = "k,am,aam_mu0,aam_mustar,fgm\n";
    for (std::size_t k = 0; k <= K; ++k) {
        out += fmt::format("{},{},{},{},{}\n", k, format_number(am[k]), format_number(aam0[k]), format_number(aams[k]), format_number(fgm[k]));
    }
    return out;
}

}  // namespace altmin::bench
