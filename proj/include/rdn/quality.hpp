#pragma once

#include "rdn/digital_net.hpp"
#include "rdn/reduction.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rdn {

/// Coordinate subset, 0-based indices in increasing order.
using Subset = std::vector<std::size_t>;

/// All non-empty subsets of {0, ..., s-1}, ordered by their bitmask.
std::vector<Subset> nonempty_subsets(std::size_t s);

/// Enumeration budgets. Exceeding one raises BudgetError; nothing is approximated.
struct QualityOptions {
    /// Maximum number of compositions d_1 + ... + d_s = d examined at one level of rho_m.
    std::uint64_t composition_budget = 10'000'000;
    /// Maximum (compositions x points) examined at one level of the box-counting oracle.
    std::uint64_t oracle_budget = 200'000'000;
    /// Largest s for which all 2^s - 1 projections are enumerated.
    std::size_t projection_limit = 10;
};

/// Number of compositions of d into s non-negative parts, saturating at UINT64_MAX.
std::uint64_t composition_count(std::size_t d, std::size_t s);

/**
 * Linear independence parameter: the largest d in [0, m] such that for every
 * d_1 + ... + d_s = d the first d_j rows of every C_j together are linearly
 * independent over F_b.
 *
 * Levels d are tried in increasing order. Within a level, compositions are
 * enumerated depth-first and the echelon basis of a shared prefix is reused,
 * so a dependent prefix rejects the level without visiting its completions.
 */
std::size_t rho_m(const GeneratingSet& g, const QualityOptions& opts = {});

/// Minimal quality parameter m - rho_m of the generated net.
std::size_t min_t(const GeneratingSet& g, const QualityOptions& opts = {});

/// Smallest t for which every elementary interval of volume b^(t-m) holds
/// exactly b^t points, found by counting points on exact numerators.
std::size_t oracle_min_t(const DigitalNet& net, const QualityOptions& opts = {});

/// min_t of the generating set restricted to the coordinates in `u`.
std::size_t projection_t(const GeneratingSet& g, std::span<const std::size_t> u, const QualityOptions& opts = {});

struct ProjectionQuality {
    Subset u;
    std::size_t t = 0;
};

struct QualityReport {
    std::size_t rho = 0;
    std::size_t t_min = 0;
    /// t_min is exact, so the net is a strict (t_min, m, s)-net.
    bool is_strict_certified = false;
    std::vector<ProjectionQuality> per_projection;
};

QualityReport quality_report(const GeneratingSet& g, bool with_projections, const QualityOptions& opts = {});

/// Outcome of checking one reduced net against a two-sided rho bound and a t bound.
struct BoundCheck {
    std::size_t rho = 0; ///< unreduced
    std::size_t t = 0;   ///< unreduced, minimal
    std::size_t rho_reduced = 0;
    std::size_t t_reduced = 0;
    std::size_t rho_lower = 0;
    std::size_t rho_upper = 0;
    std::size_t t_upper = 0;
    bool strict_checked = false;
    std::size_t strict_upper = 0;
    bool pass = false;
};

/// max{0, m - max{t, w_s}} <= rho~ <= max{0, m - w_s} and t~ <= min{m, max{t, w_s}}.
BoundCheck check_row_reduced_bounds(const GeneratingSet& g, const ReductionIndices& w,
                                    const QualityOptions& opts = {});

/// max{0, m - w_s - t} <= rho~ <= max{0, m - w_s} and t~ <= min{m, w_s + t}, for column
/// reduction. Requires g.from_sequence() unless `force`.
BoundCheck check_column_bounds(const GeneratingSet& g, const ReductionIndices& w, bool force = false,
                               const QualityOptions& opts = {});

/// As check_column_bounds for column-row reduction, plus the strict-net clause
/// rho~ <= max{0, m - max{t, w_s}} (t is computed exactly, hence strict).
BoundCheck check_column_row_bounds(const GeneratingSet& g, const ReductionIndices& w, bool force = false,
                                   const QualityOptions& opts = {});

/// max{0, m - max{w^c_s + t, w^r_s}} <= rho~ <= max{0, m - max{w^c_s, w^r_s}} and
/// t~ <= min{m, max{w^c_s + t, w^r_s}}.
BoundCheck check_mixed_bounds(const GeneratingSet& g, const ReductionIndices& w_rows,
                              const ReductionIndices& w_cols, bool force = false, const QualityOptions& opts = {});

struct ProjectionBoundCheck {
    Subset u;
    std::size_t t_u = 0; ///< unreduced projection
    std::size_t rho_reduced = 0;
    std::size_t t_reduced = 0;
    std::size_t rho_lower = 0;
    std::size_t rho_upper = 0;
    std::size_t t_upper = 0;
    bool pass = false;
};

/**
 * Checks every non-empty projection u of the reduced net against the
 * projection bounds, with w taken at max(u). The row kind uses
 * max{w, t_u}; column and column_row use w + t_u.
 */
std::vector<ProjectionBoundCheck> check_projection_bounds(const GeneratingSet& g, const ReductionIndices& w,
                                                          ReductionKind kind, bool force = false,
                                                          const QualityOptions& opts = {});

} // namespace rdn
