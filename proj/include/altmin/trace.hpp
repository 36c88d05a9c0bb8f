#pragma once
#include <altmin/linalg.hpp>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace altmin {

enum class Method { am, aam, fgm };

inline std::string_view to_string(Method m)
{
    switch (m) {
        case Method::am: return "am";
        case Method::aam: return "aam";
        case Method::fgm: return "fgm";
    }
    return "?";
}

/// How AAM refreshes the momentum point v.
enum class MomentumRule {
    /// v ← (τ_k v + μ a y − a ∇f(y)) / τ_{k+1}, the minimizer of ψ_{k+1}.
    proof,
    /// v ← v − a ∇f(y), as printed in the algorithm listing.
    literal,
};

enum class FgmMomentum {
    /// v ← z^{k+1} + k/(k+3)·(z^{k+1} − z^k)
    standard,
    /// v ← z^k + k/(k+3)·(z^{k+1} − z^k)
    as_printed,
};

struct SolverConfig
{
    std::size_t max_iters = 200;
    /// Stop once F − F* drops to this value (only when F* is known).
    std::optional<double> target_gap;
    double grad_tolerance = 1e-12;
    /// μ used by AAM; 0 runs it in the "μ unknown" mode.
    double mu_assumed = 0.0;
    /// When set, AAM picks a_{k+1} from the known-L equation; otherwise from the
    /// adaptive sufficient-decrease equation. FGM requires it (or a declared L).
    std::optional<double> l_known;
    double line_search_tol = 1e-10;
    std::uint64_t rng_seed = 0;
    MomentumRule momentum = MomentumRule::proof;
    FgmMomentum fgm_momentum = FgmMomentum::standard;
    /// Starting point; zero when absent.
    std::optional<Vector> x0;
    bool store_iterates = true;
    bool record_wall_time = false;
};

enum class Status {
    max_iters,
    target_gap,
    grad_tolerance,
    /// The adaptive a-equation has no positive root: no decrease was possible.
    no_positive_root,
};

inline std::string_view to_string(Status s)
{
    switch (s) {
        case Status::max_iters: return "max_iters";
        case Status::target_gap: return "target_gap";
        case Status::grad_tolerance: return "grad_tolerance";
        case Status::no_positive_root: return "no_positive_root";
    }
    return "?";
}

/// State at iterate k plus the step that produced it from iterate k−1.
///
/// For AM a record is written after every block minimization; `k` counts
/// block minimizations and `sweep_end` marks the points x^s that close a
/// cyclic sweep. For AAM, `y`, `f_y`, `grad_y`, `beta` and `block` describe
/// step k−1 (y^{k−1}, i_{k−1}, β_{k−1}) and `a` is a_k; `A`, `tau`, `v`
/// and `psi_min` describe iterate k.
struct IterationRecord
{
    std::size_t k = 0;
    Vector x;
    double f_value = 0.0;
    double composite_value = 0.0;
    double grad_norm = 0.0;
    std::optional<std::size_t> block;
    bool sweep_end = false;

    std::optional<double> beta;
    std::optional<double> a;
    std::optional<double> A;
    std::optional<double> tau;
    std::optional<double> f_y;
    std::optional<double> psi_min;
    Vector y;
    Vector grad_y;
    Vector v;

    double wall_ms = 0.0;
};

struct SolverTrace
{
    Method method = Method::am;
    std::size_t num_blocks = 1;
    double mu_assumed = 0.0;
    MomentumRule momentum = MomentumRule::proof;
    Vector x0;
    std::vector<IterationRecord> records;
    Status status = Status::max_iters;

    const IterationRecord& last() const { return records.back(); }

    /// Records closing a full AM sweep, x^0 first.
    std::vector<const IterationRecord*> sweep_points() const
    {
        std::vector<const IterationRecord*> out;
        for (const auto& r : records)
            if (r.k == 0 || r.sweep_end) out.push_back(&r);
        return out;
    }
};

}  // namespace altmin
