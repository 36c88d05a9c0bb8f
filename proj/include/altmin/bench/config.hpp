#pragma once
#include <altmin/certificates.hpp>
#include <altmin/error.hpp>
#include <altmin/trace.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace altmin::bench {

enum class InstanceKind { quadratic, rank_deficient, composite_l1, composite_box, nonlinear };

inline std::string to_string(InstanceKind k)
{
    switch (k) {
        case InstanceKind::quadratic: return "quadratic";
        case InstanceKind::rank_deficient: return "rank_deficient";
        case InstanceKind::composite_l1: return "composite_l1";
        case InstanceKind::composite_box: return "composite_box";
        case InstanceKind::nonlinear: return "nonlinear";
    }
    return "?";
}

/// Seeded instance description; the [instance] section of a config.
struct InstanceSpec
{
    InstanceKind kind = InstanceKind::quadratic;
    std::uint64_t seed = 0;
    std::size_t dim = 64;
    double cond_number = 100.0;
    std::size_t blocks = 2;
    double gamma = 1.0;
    double lo = -0.3;
    double hi = 0.3;
    /// nonlinear only: number of equations and the nonlinearity weight.
    std::size_t m = 10;
    double eps = 0.5;
    /// rank_deficient only: number of zero singular values.
    std::size_t deficiency = 1;

    bool operator==(const InstanceSpec&) const = default;
};

/// μ given to AAM: a number, or the instance's declared strong convexity.
struct MuSetting
{
    bool use_declared = false;
    double value = 0.0;
    bool operator==(const MuSetting&) const = default;
};

/// L given to AAM/FGM: the declared constant, none (adaptive rule), or a number.
struct LipschitzSetting
{
    enum class Mode { known, unknown, value };
    Mode mode = Mode::known;
    double value = 0.0;
    bool operator==(const LipschitzSetting&) const = default;
};

struct SolverSpec
{
    std::string label;
    Method method = Method::am;
    std::size_t max_iters = 200;
    std::optional<double> target_gap;
    double grad_tolerance = 1e-12;
    MuSetting mu;
    LipschitzSetting lipschitz;
    MomentumRule momentum = MomentumRule::proof;
    FgmMomentum fgm_momentum = FgmMomentum::standard;
    double line_search_tol = 1e-10;

    bool operator==(const SolverSpec&) const = default;
};

struct OutputSpec
{
    std::string dir = "out";
    std::string trace = "trace.csv";
    std::string summary = "summary.json";
    std::string report = "report.json";
    bool wall_time = false;
    bool operator==(const OutputSpec&) const = default;
};

struct RunConfig
{
    InstanceSpec instance;
    std::vector<SolverSpec> solvers;
    std::vector<BoundKind> certificates;
    OutputSpec output;
    std::size_t figure_iterations = 200;

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& msg)
{
    fail(Errc::config_error, msg);
}

template <class T>
T get_value(const boost::property_tree::ptree& pt, const std::string& section, const std::string& key, T fallback)
{
    const auto node = pt.get_child_optional(key);
    if (!node) return fallback;
    const auto v = node->get_value_optional<T>();
    if (!v) config_fail("[" + section + "] " + key + ": cannot parse '" + node->data() + "'");
    return *v;
}

inline std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// Drops `;` or `#` comments that start a line or follow whitespace.
inline std::string strip_comments(const std::string& text)
{
    std::istringstream in(text);
    std::string out, line;
    while (std::getline(in, line)) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            if ((line[i] == ';' || line[i] == '#') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line.erase(i);
                break;
            }
        }
        out += trim(line);
        out += '\n';
    }
    return out;
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline std::string format_double(double v)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

inline InstanceKind parse_instance_kind(const std::string& s)
{
    for (auto k : {InstanceKind::quadratic, InstanceKind::rank_deficient, InstanceKind::composite_l1,
                   InstanceKind::composite_box, InstanceKind::nonlinear}) {
        if (to_string(k) == s) return k;
    }
    config_fail("[instance] kind: unknown instance '" + s + "'");
}

inline Method parse_method(const std::string& section, const std::string& s)
{
    for (auto m : {Method::am, Method::aam, Method::fgm})
        if (to_string(m) == s) return m;
    config_fail("[" + section + "] method: unknown solver '" + s + "'");
}

inline MuSetting parse_mu(const std::string& section, const std::string& s)
{
    if (s == "mu_star") return {true, 0.0};
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !(v >= 0.0)) throw std::invalid_argument(s);
        return {false, v};
    } catch (const std::exception&) {
        config_fail("[" + section + "] mu: expected a non-negative number or mu_star, got '" + s + "'");
    }
}

inline LipschitzSetting parse_lipschitz(const std::string& section, const std::string& s)
{
    if (s == "known") return {LipschitzSetting::Mode::known, 0.0};
    if (s == "unknown") return {LipschitzSetting::Mode::unknown, 0.0};
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !(v > 0.0)) throw std::invalid_argument(s);
        return {LipschitzSetting::Mode::value, v};
    } catch (const std::exception&) {
        config_fail("[" + section + "] lipschitz: expected known, unknown or a positive number, got '" + s + "'");
    }
}

}  // namespace detail

inline RunConfig parse_config_tree(const boost::property_tree::ptree& pt)
{
    using detail::get_value;
    RunConfig cfg;

    const auto inst = pt.get_child_optional("instance");
    if (!inst) detail::config_fail("missing [instance] section");
    auto& in = cfg.instance;
    in.kind = detail::parse_instance_kind(get_value<std::string>(*inst, "instance", "kind", "quadratic"));
    in.seed = get_value<std::uint64_t>(*inst, "instance", "seed", in.seed);
    in.dim = get_value<std::size_t>(*inst, "instance", "dim", in.dim);
    in.cond_number = get_value<double>(*inst, "instance", "cond_number", in.cond_number);
    in.blocks = get_value<std::size_t>(*inst, "instance", "blocks", in.blocks);
    in.gamma = get_value<double>(*inst, "instance", "gamma", in.gamma);
    in.lo = get_value<double>(*inst, "instance", "lo", in.lo);
    in.hi = get_value<double>(*inst, "instance", "hi", in.hi);
    in.m = get_value<std::size_t>(*inst, "instance", "m", in.m);
    in.eps = get_value<double>(*inst, "instance", "eps", in.eps);
    in.deficiency = get_value<std::size_t>(*inst, "instance", "deficiency", in.deficiency);

    for (const auto& [name, node] : pt) {
        if (name.rfind("solver:", 0) != 0) continue;
        SolverSpec s;
        s.label = name.substr(7);
        if (s.label.empty()) detail::config_fail("solver section needs a name: [solver:NAME]");
        for (const auto& other : cfg.solvers)
            if (other.label == s.label) detail::config_fail("duplicate solver '" + s.label + "'");
        s.method = detail::parse_method(name, get_value<std::string>(node, name, "method", s.label));
        s.max_iters = get_value<std::size_t>(node, name, "max_iters", s.max_iters);
        if (s.max_iters < 1) detail::config_fail("[" + name + "] max_iters must be at least 1");
        if (node.get_child_optional("target_gap")) s.target_gap = get_value<double>(node, name, "target_gap", 0.0);
        s.grad_tolerance = get_value<double>(node, name, "grad_tolerance", s.grad_tolerance);
        s.line_search_tol = get_value<double>(node, name, "line_search_tol", s.line_search_tol);
        s.mu = detail::parse_mu(name, get_value<std::string>(node, name, "mu", "0"));
        s.lipschitz = detail::parse_lipschitz(name, get_value<std::string>(node, name, "lipschitz", "known"));
        const auto mom = get_value<std::string>(node, name, "momentum", "proof");
        if (mom == "proof") s.momentum = MomentumRule::proof;
        else if (mom == "literal") s.momentum = MomentumRule::literal;
        else detail::config_fail("[" + name + "] momentum: expected proof or literal, got '" + mom + "'");
        const auto fm = get_value<std::string>(node, name, "fgm_momentum", "standard");
        if (fm == "standard") s.fgm_momentum = FgmMomentum::standard;
        else if (fm == "as_printed") s.fgm_momentum = FgmMomentum::as_printed;
        else detail::config_fail("[" + name + "] fgm_momentum: expected standard or as_printed, got '" + fm + "'");
        cfg.solvers.push_back(std::move(s));
    }

    if (const auto certs = pt.get_child_optional("certificates")) {
        for (const auto& item : detail::split_list(get_value<std::string>(*certs, "certificates", "list", ""))) {
            const auto k = parse_bound_kind(item);
            if (!k) detail::config_fail("[certificates] list: unknown certificate '" + item + "'");
            cfg.certificates.push_back(*k);
        }
    }

    if (const auto out = pt.get_child_optional("output")) {
        cfg.output.dir = get_value<std::string>(*out, "output", "dir", cfg.output.dir);
        cfg.output.trace = get_value<std::string>(*out, "output", "trace", cfg.output.trace);
        cfg.output.summary = get_value<std::string>(*out, "output", "summary", cfg.output.summary);
        cfg.output.report = get_value<std::string>(*out, "output", "report", cfg.output.report);
        cfg.output.wall_time = get_value<bool>(*out, "output", "wall_time", cfg.output.wall_time);
    }
    if (const auto fig = pt.get_child_optional("figure")) {
        cfg.figure_iterations = get_value<std::size_t>(*fig, "figure", "iterations", cfg.figure_iterations);
    }
    return cfg;
}

inline RunConfig parse_config_string(const std::string& raw)
{
    const std::string text = detail::strip_comments(raw);
    boost::property_tree::ptree pt;
    std::istringstream is(text);
    try {
        boost::property_tree::read_ini(is, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        detail::config_fail(std::string("malformed config: ") + e.what());
    }
    // read_ini drops sections without keys; restore them in file order.
    boost::property_tree::ptree ordered;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        line = detail::trim(line);
        if (line.size() < 2 || line.front() != '[' || line.back() != ']') continue;
        const std::string name = detail::trim(line.substr(1, line.size() - 2));
        const auto child = pt.get_child_optional(boost::property_tree::ptree::path_type(name, '\0'));
        ordered.push_back({name, child ? *child : boost::property_tree::ptree()});
    }
    return parse_config_tree(ordered);
}

inline RunConfig parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) detail::config_fail("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str());
}

inline std::string write_instance_section(const InstanceSpec& in)
{
    using detail::format_double;
    std::ostringstream os;
    os << "[instance]\n";
    os << "kind = " << to_string(in.kind) << "\n";
    os << "seed = " << in.seed << "\n";
    os << "dim = " << in.dim << "\n";
    os << "cond_number = " << format_double(in.cond_number) << "\n";
    os << "blocks = " << in.blocks << "\n";
    os << "gamma = " << format_double(in.gamma) << "\n";
    os << "lo = " << format_double(in.lo) << "\n";
    os << "hi = " << format_double(in.hi) << "\n";
    os << "m = " << in.m << "\n";
    os << "eps = " << format_double(in.eps) << "\n";
    os << "deficiency = " << in.deficiency << "\n";
    return os.str();
}

/// Serializes a config so that parse_config_string(write_config(c)) == c.
inline std::string write_config(const RunConfig& cfg)
{
    using detail::format_double;
    std::ostringstream os;
    os << write_instance_section(cfg.instance);
    for (const auto& s : cfg.solvers) {
        os << "\n[solver:" << s.label << "]\n";
        os << "method = " << to_string(s.method) << "\n";
        os << "max_iters = " << s.max_iters << "\n";
        if (s.target_gap) os << "target_gap = " << format_double(*s.target_gap) << "\n";
        os << "grad_tolerance = " << format_double(s.grad_tolerance) << "\n";
        os << "line_search_tol = " << format_double(s.line_search_tol) << "\n";
        os << "mu = " << (s.mu.use_declared ? std::string("mu_star") : format_double(s.mu.value)) << "\n";
        switch (s.lipschitz.mode) {
            case LipschitzSetting::Mode::known: os << "lipschitz = known\n"; break;
            case LipschitzSetting::Mode::unknown: os << "lipschitz = unknown\n"; break;
            case LipschitzSetting::Mode::value: os << "lipschitz = " << format_double(s.lipschitz.value) << "\n"; break;
        }
        os << "momentum = " << (s.momentum == MomentumRule::proof ? "proof" : "literal") << "\n";
        os << "fgm_momentum = " << (s.fgm_momentum == FgmMomentum::standard ? "standard" : "as_printed") << "\n";
    }
    os << "\n[certificates]\nlist = ";
    for (std::size_t j = 0; j < cfg.certificates.size(); ++j) os << (j ? ", " : "") << to_string(cfg.certificates[j]);
    os << "\n\n[output]\n";
    os << "dir = " << cfg.output.dir << "\n";
    os << "trace = " << cfg.output.trace << "\n";
    os << "summary = " << cfg.output.summary << "\n";
    os << "report = " << cfg.output.report << "\n";
    os << "wall_time = " << (cfg.output.wall_time ? "true" : "false") << "\n";
    os << "\n[figure]\niterations = " << cfg.figure_iterations << "\n";
    return os.str();
}

}  // namespace altmin::bench
