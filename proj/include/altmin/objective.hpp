#pragma once
#include <altmin/error.hpp>
#include <altmin/linalg.hpp>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace altmin {

/// Disjoint split of the coordinates {0, ..., m-1} into non-empty blocks.
class BlockPartition
{
public:
    BlockPartition() = default;

    BlockPartition(std::size_t total_dim, std::vector<std::vector<std::size_t>> blocks)
        : total_dim_(total_dim), blocks_(std::move(blocks))
    {
        if (total_dim_ == 0) fail(Errc::bad_dimension, "partition of an empty space");
        if (blocks_.empty()) fail(Errc::bad_dimension, "partition needs at least one block");
        std::vector<char> seen(total_dim_, 0);
        std::size_t count = 0;
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            if (blocks_[b].empty()) fail(Errc::bad_dimension, "block " + std::to_string(b) + " is empty");
            for (auto j : blocks_[b]) {
                if (j >= total_dim_) fail(Errc::bad_dimension, "index " + std::to_string(j) + " out of range");
                if (seen[j]) fail(Errc::bad_dimension, "index " + std::to_string(j) + " appears twice");
                seen[j] = 1;
                ++count;
            }
        }
        if (count != total_dim_) fail(Errc::bad_dimension, "blocks do not cover every coordinate");
    }

    static BlockPartition contiguous(const std::vector<std::size_t>& sizes)
    {
        std::vector<std::vector<std::size_t>> blocks;
        std::size_t offset = 0;
        for (auto s : sizes) {
            std::vector<std::size_t> b(s);
            std::iota(b.begin(), b.end(), offset);
            offset += s;
            blocks.push_back(std::move(b));
        }
        return BlockPartition(offset, std::move(blocks));
    }

    /// `n_blocks` contiguous blocks of equal size; `dim` must be divisible.
    static BlockPartition equal(std::size_t dim, std::size_t n_blocks)
    {
        if (n_blocks == 0 || dim % n_blocks != 0) {
            fail(Errc::bad_dimension, std::to_string(dim) + " is not divisible into "
                                          + std::to_string(n_blocks) + " equal blocks");
        }
        return contiguous(std::vector<std::size_t>(n_blocks, dim / n_blocks));
    }

    std::size_t total_dim() const { return total_dim_; }
    std::size_t num_blocks() const { return blocks_.size(); }
    const std::vector<std::size_t>& block(std::size_t i) const { return blocks_.at(i); }
    std::size_t block_size(std::size_t i) const { return blocks_.at(i).size(); }

    Vector gather(const Vector& x, std::size_t i) const
    {
        const auto& idx = blocks_.at(i);
        Vector out(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t j = 0; j < idx.size(); ++j) out[static_cast<Eigen::Index>(j)] = x[static_cast<Eigen::Index>(idx[j])];
        return out;
    }

    void scatter(Vector& x, std::size_t i, const Vector& xi) const
    {
        const auto& idx = blocks_.at(i);
        if (static_cast<std::size_t>(xi.size()) != idx.size()) {
            fail(Errc::dimension_mismatch, "block " + std::to_string(i) + " expects "
                                               + std::to_string(idx.size()) + " entries");
        }
        for (std::size_t j = 0; j < idx.size(); ++j) x[static_cast<Eigen::Index>(idx[j])] = xi[static_cast<Eigen::Index>(j)];
    }

    /// Column indices of every block except `i`, in partition order.
    std::vector<std::size_t> complement(std::size_t i) const
    {
        std::vector<std::size_t> out;
        for (std::size_t b = 0; b < blocks_.size(); ++b)
            if (b != i) out.insert(out.end(), blocks_[b].begin(), blocks_[b].end());
        return out;
    }

private:
    std::size_t total_dim_ = 0;
    std::vector<std::vector<std::size_t>> blocks_;
};

using ValueFn = std::function<double(const Vector&)>;
using BlockGradientFn = std::function<Vector(const Vector&, std::size_t)>;
/// Minimizer of F over block i with the other blocks of x held fixed;
/// returns the block-i coordinates only.
using BlockArgminFn = std::function<Vector(const Vector&, std::size_t)>;
/// prox_{g/M}(point) over the block's feasible set.
using ProxFn = std::function<Vector(const Vector&, double)>;

/// Non-smooth term g_i on one block. An empty `value` means g_i is identically
/// zero; constraint sets Q_i are folded in as indicator functions.
struct BlockTerm
{
    ValueFn value;
    ProxFn prox;
    bool constrained = false;
    std::string label = "zero";

    bool is_zero() const { return !value; }
};

/// Declared constants. Absent means unknown.
struct Constants
{
    std::optional<double> lipschitz;
    std::optional<double> strong_convexity;
    /// Polyak-Lojasiewicz constant: ½‖∇f‖² ≥ pl·(f − f*).
    std::optional<double> pl;
    std::vector<std::optional<double>> block_lipschitz;
    std::vector<std::optional<double>> block_strong_convexity;
};

struct Optimum
{
    Vector point;
    double value = 0.0;
};

/// F(x) = f(x) + Σ g_i(x_i) over a block partition.
struct ObjectiveHandle
{
    BlockPartition partition;
    ValueFn smooth_value;
    BlockGradientFn block_gradient;
    BlockArgminFn block_argmin;
    std::vector<BlockTerm> terms;
    Constants constants;
    std::optional<Optimum> optimum;
    /// d ↦ dᵀ∇²f d, present only when f is exactly quadratic.
    std::function<double(const Vector&)> curvature;
    std::string name;

    std::size_t dim() const { return partition.total_dim(); }
    std::size_t num_blocks() const { return partition.num_blocks(); }

    const BlockTerm& term(std::size_t i) const
    {
        static const BlockTerm zero_term{};
        if (terms.empty()) return zero_term;
        return terms.at(i);
    }

    bool is_smooth() const
    {
        for (std::size_t i = 0; i < num_blocks(); ++i)
            if (!term(i).is_zero()) return false;
        return true;
    }

    bool is_unconstrained() const
    {
        for (std::size_t i = 0; i < num_blocks(); ++i)
            if (term(i).constrained) return false;
        return true;
    }

    std::optional<double> block_lipschitz(std::size_t i) const
    {
        if (i < constants.block_lipschitz.size()) return constants.block_lipschitz[i];
        return std::nullopt;
    }

    std::optional<double> block_strong_convexity(std::size_t i) const
    {
        if (i < constants.block_strong_convexity.size()) return constants.block_strong_convexity[i];
        return std::nullopt;
    }
};

namespace detail {

inline void require_dim(const ObjectiveHandle& h, const Vector& x)
{
    if (static_cast<std::size_t>(x.size()) != h.dim()) {
        fail(Errc::dimension_mismatch, "point has length " + std::to_string(x.size())
                                           + ", objective has dimension " + std::to_string(h.dim()));
    }
}

inline void require_block(const ObjectiveHandle& h, std::size_t i)
{
    if (i >= h.num_blocks()) {
        fail(Errc::invalid_argument, "block " + std::to_string(i) + " out of range");
    }
}

}  // namespace detail

inline Vector full_gradient(const ObjectiveHandle& h, const Vector& x)
{
    detail::require_dim(h, x);
    Vector g(x.size());
    for (std::size_t i = 0; i < h.num_blocks(); ++i) h.partition.scatter(g, i, h.block_gradient(x, i));
    return g;
}

/// g_i evaluated on block i of x (zero when the block has no term).
inline double block_term_value(const ObjectiveHandle& h, const Vector& x, std::size_t i)
{
    const auto& t = h.term(i);
    if (t.is_zero()) return 0.0;
    return t.value(h.partition.gather(x, i));
}

inline double composite_value(const ObjectiveHandle& h, const Vector& x)
{
    detail::require_dim(h, x);
    double v = h.smooth_value(x);
    for (std::size_t i = 0; i < h.num_blocks(); ++i) v += block_term_value(h, x, i);
    return v;
}

/// Copy of x with block i replaced by the block minimizer.
inline Vector exact_block_min(const ObjectiveHandle& h, const Vector& x, std::size_t i)
{
    detail::require_dim(h, x);
    detail::require_block(h, i);
    if (!h.block_argmin) fail(Errc::no_block_solver, "objective has no block minimizer");
    Vector z = x;
    h.partition.scatter(z, i, h.block_argmin(x, i));
    return z;
}

}  // namespace altmin
