#pragma once
#include <stdexcept>
#include <string>
#include <string_view>

namespace altmin {

enum class Errc {
    dimension_mismatch,
    not_spd,
    not_symmetric,
    non_finite,
    no_block_solver,
    no_prox,
    no_optimum,
    constrained_block,
    no_positive_root,
    non_smooth_unsupported,
    missing_lipschitz,
    missing_constants,
    too_short,
    bad_dimension,
    bad_shape,
    invalid_argument,
    config_error,
    trace_parse_error,
};

inline std::string_view to_string(Errc e)
{
    switch (e) {
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::not_spd: return "NotSpd";
        case Errc::not_symmetric: return "NotSymmetric";
        case Errc::non_finite: return "NonFinite";
        case Errc::no_block_solver: return "NoBlockSolver";
        case Errc::no_prox: return "NoProx";
        case Errc::no_optimum: return "NoOptimum";
        case Errc::constrained_block: return "ConstrainedBlock";
        case Errc::no_positive_root: return "NoPositiveRoot";
        case Errc::non_smooth_unsupported: return "NonSmoothUnsupported";
        case Errc::missing_lipschitz: return "MissingL";
        case Errc::missing_constants: return "MissingConstants";
        case Errc::too_short: return "TooShort";
        case Errc::bad_dimension: return "BadDimension";
        case Errc::bad_shape: return "BadShape";
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::config_error: return "ConfigError";
        case Errc::trace_parse_error: return "TraceParseError";
    }
    return "Unknown";
}

/// Every failure in the library is reported through this exception; `code()`
/// identifies the category so callers (the CLI in particular) can map it to
/// an exit status.
class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what)
{
    throw Error(code, what);
}

}  // namespace altmin
