#pragma once
#include <altmin/error.hpp>
#include <fmt/format.h>
#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace altmin::bench {

inline constexpr const char* trace_header = "k,solver,f_gap,grad_norm,block,beta,a,A,tau,bound_aam_main,bound_am_linear,wall_ms";

struct TraceRow
{
    std::size_t k = 0;
    std::string solver;
    double f_gap = 0.0;
    double grad_norm = 0.0;
    std::optional<std::size_t> block;
    std::optional<double> beta;
    std::optional<double> a;
    std::optional<double> A;
    std::optional<double> tau;
    std::optional<double> bound_aam_main;
    std::optional<double> bound_am_linear;
    std::optional<double> wall_ms;
};

inline std::string format_number(double v)
{
    return fmt::format("{:.17g}", v);
}

inline void sort_rows(std::vector<TraceRow>& rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const TraceRow& x, const TraceRow& y) {
        if (x.solver != y.solver) return x.solver < y.solver;
        return x.k < y.k;
    });
}

inline std::string write_trace_csv(std::vector<TraceRow> rows)
{
    sort_rows(rows);
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    std::string out = std::string(trace_header) + "\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.k, r.solver, format_number(r.f_gap),
                           format_number(r.grad_norm), r.block ? std::to_string(*r.block) : std::string(), opt(r.beta),
                           opt(r.a), opt(r.A), opt(r.tau), opt(r.bound_aam_main), opt(r.bound_am_linear), opt(r.wall_ms));
    }
    return out;
}

namespace detail {

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& msg)
{
    fail(Errc::trace_parse_error, "trace line " + std::to_string(line) + ": " + msg);
}

inline double parse_double(const std::string& s, std::size_t line, const char* column)
{
    std::istringstream is(s);
    is.imbue(std::locale::classic());
    double v = 0.0;
    is >> v;
    if (is.fail() || !is.eof()) parse_fail(line, std::string("bad number in column ") + column + ": '" + s + "'");
    return v;
}

inline std::optional<double> parse_optional(const std::string& s, std::size_t line, const char* column)
{
    if (s.empty()) return std::nullopt;
    return parse_double(s, line, column);
}

inline std::size_t parse_index(const std::string& s, std::size_t line, const char* column)
{
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        parse_fail(line, std::string("bad integer in column ") + column + ": '" + s + "'");
    }
    return static_cast<std::size_t>(std::stoull(s));
}

}  // namespace detail

inline std::vector<TraceRow> parse_trace_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) detail::parse_fail(1, "empty trace");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != trace_header) detail::parse_fail(1, "unexpected header '" + line + "'");
    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 12) detail::parse_fail(lineno, "expected 12 fields, found " + std::to_string(f.size()));
        TraceRow r;
        r.k = detail::parse_index(f[0], lineno, "k");
        r.solver = f[1];
        if (r.solver.empty()) detail::parse_fail(lineno, "empty solver label");
        r.f_gap = detail::parse_double(f[2], lineno, "f_gap");
        r.grad_norm = detail::parse_double(f[3], lineno, "grad_norm");
        if (!f[4].empty()) r.block = detail::parse_index(f[4], lineno, "block");
        r.beta = detail::parse_optional(f[5], lineno, "beta");
        r.a = detail::parse_optional(f[6], lineno, "a");
        r.A = detail::parse_optional(f[7], lineno, "A");
        r.tau = detail::parse_optional(f[8], lineno, "tau");
        r.bound_aam_main = detail::parse_optional(f[9], lineno, "bound_aam_main");
        r.bound_am_linear = detail::parse_optional(f[10], lineno, "bound_am_linear");
        r.wall_ms = detail::parse_optional(f[11], lineno, "wall_ms");
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<TraceRow> read_trace_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(Errc::trace_parse_error, "cannot read trace file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_trace_csv(ss.str());
}

}  // namespace altmin::bench
