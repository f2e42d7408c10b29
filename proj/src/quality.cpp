#include "rdn/quality.hpp"

#include "rdn/errors.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <limits>
#include <numeric>

namespace rdn {

namespace {

constexpr auto saturated = std::numeric_limits<std::uint64_t>::max();

class IndependenceSearch {
public:
    explicit IndependenceSearch(const GeneratingSet& g) : g_(g) {}

    // True iff every composition of d into s parts yields an independent system.
    bool level_independent(std::size_t d) const {
        return descend(0, d, EchelonBasis(g_.modulus(), g_.m()));
    }

private:
    bool descend(std::size_t j, std::size_t remaining, EchelonBasis basis) const {
        const auto& c = g_.matrix(j);
        if (j + 1 == g_.s()) {
            for (std::size_t i = 0; i < remaining; ++i) {
                if (!basis.insert(c.row(i))) return false;
            }
            return true;
        }
        for (std::size_t dj = 0; dj <= remaining; ++dj) {
            if (dj > 0 && !basis.insert(c.row(dj - 1))) return false;
            if (!descend(j + 1, remaining - dj, basis)) return false;
        }
        return true;
    }

    const GeneratingSet& g_;
};

// Visits every composition of d into parts.size() parts; stops when f returns false.
template <typename F>
bool for_each_composition(std::vector<std::size_t>& parts, std::size_t j, std::size_t remaining, F&& f) {
    if (j + 1 == parts.size()) {
        parts[j] = remaining;
        return f(parts);
    }
    for (std::size_t dj = 0; dj <= remaining; ++dj) {
        parts[j] = dj;
        if (!for_each_composition(parts, j + 1, remaining - dj, f)) return false;
    }
    return true;
}

std::size_t clamp_to(std::uint64_t w, std::size_t m) { return w < m ? static_cast<std::size_t>(w) : m; }

std::size_t sub_floor0(std::size_t a, std::size_t b) { return a > b ? a - b : 0; }

BoundCheck finish(BoundCheck check) {
    check.pass = check.rho_lower <= check.rho_reduced && check.rho_reduced <= check.rho_upper &&
                 check.t_reduced <= check.t_upper && (!check.strict_checked || check.rho_reduced <= check.strict_upper);
    return check;
}

BoundCheck base_check(const GeneratingSet& g, const GeneratingSet& reduced, const QualityOptions& opts) {
    BoundCheck check;
    check.rho = rho_m(g, opts);
    check.t = g.m() - check.rho;
    check.rho_reduced = rho_m(reduced, opts);
    check.t_reduced = g.m() - check.rho_reduced;
    return check;
}

ReduceOptions quiet(bool force) { return ReduceOptions{force, nullptr}; }

void require_sequence(const GeneratingSet& g, bool force) {
    if (!g.from_sequence() && !force) {
        throw ValidationError("column-type bounds need generating matrices derived from a (t,s)-sequence");
    }
}

} // namespace

std::vector<Subset> nonempty_subsets(std::size_t s) {
    if (s >= 63) throw BudgetError(fmt::format("cannot enumerate subsets of {} coordinates", s));
    std::vector<Subset> out;
    out.reserve((std::size_t{1} << s) - 1);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << s); ++mask) {
        Subset u;
        for (std::size_t j = 0; j < s; ++j) {
            if (mask >> j & 1) u.push_back(j);
        }
        out.push_back(std::move(u));
    }
    return out;
}

std::uint64_t composition_count(std::size_t d, std::size_t s) {
    if (s == 0) return d == 0 ? 1 : 0;
    // binom(d + s - 1, d) via the multiplicative formula; each partial product is an exact binomial.
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= d; ++i) {
        const std::uint64_t factor = s - 1 + i;
        const std::uint64_t g = std::gcd(result, i);
        const std::uint64_t r = result / g;
        const std::uint64_t f = factor / (i / g);
        if (r > saturated / f) return saturated;
        result = r * f;
    }
    return result;
}

std::size_t rho_m(const GeneratingSet& g, const QualityOptions& opts) {
    const IndependenceSearch search(g);
    for (std::size_t d = 1; d <= g.m(); ++d) {
        const auto count = composition_count(d, g.s());
        if (count > opts.composition_budget) {
            throw BudgetError(fmt::format("too large for exact rho: {} compositions at d = {} (budget {})", count, d,
                                          opts.composition_budget));
        }
        if (!search.level_independent(d)) return d - 1;
    }
    return g.m();
}

std::size_t min_t(const GeneratingSet& g, const QualityOptions& opts) { return g.m() - rho_m(g, opts); }

std::size_t oracle_min_t(const DigitalNet& net, const QualityOptions& opts) {
    const std::uint64_t b = net.modulus();
    const std::size_t m = net.m();
    const std::size_t s = net.s();
    const std::uint64_t n = net.size();

    std::vector<std::uint64_t> power(m + 1, 1);
    for (std::size_t i = 1; i <= m; ++i) power[i] = power[i - 1] * b;

    std::vector<std::uint64_t> counts;
    std::vector<std::size_t> parts(s);
    for (std::size_t t = 0; t < m; ++t) {
        const std::size_t d = m - t;
        const auto comps = composition_count(d, s);
        if (comps == saturated || comps > opts.oracle_budget / n) {
            throw BudgetError(fmt::format("box-counting oracle too large: {} compositions x {} points", comps, n));
        }
        counts.assign(power[d], 0);
        const bool is_net = for_each_composition(parts, 0, d, [&](const std::vector<std::size_t>& dims) {
            std::fill(counts.begin(), counts.end(), 0);
            for (std::uint64_t k = 0; k < n; ++k) {
                std::uint64_t cell = 0;
                for (std::size_t j = 0; j < s; ++j) {
                    cell = cell * power[dims[j]] + net.numerator(k, j) / power[m - dims[j]];
                }
                ++counts[cell];
            }
            return std::all_of(counts.begin(), counts.end(), [&](std::uint64_t c) { return c == power[t]; });
        });
        if (is_net) return t;
    }
    return m;
}

std::size_t projection_t(const GeneratingSet& g, std::span<const std::size_t> u, const QualityOptions& opts) {
    if (u.empty()) throw ValidationError("projection needs a non-empty coordinate subset");
    return min_t(g.project(u), opts);
}

QualityReport quality_report(const GeneratingSet& g, bool with_projections, const QualityOptions& opts) {
    QualityReport report;
    report.rho = rho_m(g, opts);
    report.t_min = g.m() - report.rho;
    report.is_strict_certified = true;
    if (with_projections) {
        if (g.s() > opts.projection_limit) {
            throw BudgetError(fmt::format("s = {} exceeds the projection limit {}", g.s(), opts.projection_limit));
        }
        for (auto& u : nonempty_subsets(g.s())) {
            const std::size_t t = projection_t(g, u, opts);
            report.per_projection.push_back({std::move(u), t});
        }
    }
    return report;
}

BoundCheck check_row_reduced_bounds(const GeneratingSet& g, const ReductionIndices& w, const QualityOptions& opts) {
    const std::size_t m = g.m();
    auto check = base_check(g, row_reduce(g, w, quiet(false)), opts);
    const std::size_t ws = clamp_to(w.last(), m);
    check.rho_lower = sub_floor0(m, std::max(check.t, ws));
    check.rho_upper = sub_floor0(m, ws);
    check.t_upper = std::min(m, std::max(check.t, ws));
    return finish(check);
}

BoundCheck check_column_bounds(const GeneratingSet& g, const ReductionIndices& w, bool force,
                               const QualityOptions& opts) {
    require_sequence(g, force);
    const std::size_t m = g.m();
    auto check = base_check(g, column_reduce(g, w, quiet(true)), opts);
    const std::size_t ws = clamp_to(w.last(), m);
    check.rho_lower = sub_floor0(m, ws + check.t);
    check.rho_upper = sub_floor0(m, ws);
    check.t_upper = std::min(m, ws + check.t);
    return finish(check);
}

BoundCheck check_column_row_bounds(const GeneratingSet& g, const ReductionIndices& w, bool force,
                                   const QualityOptions& opts) {
    require_sequence(g, force);
    const std::size_t m = g.m();
    auto check = base_check(g, column_row_reduce(g, w, quiet(true)), opts);
    const std::size_t ws = clamp_to(w.last(), m);
    check.rho_lower = sub_floor0(m, ws + check.t);
    check.rho_upper = sub_floor0(m, ws);
    check.t_upper = std::min(m, ws + check.t);
    check.strict_checked = true;
    check.strict_upper = sub_floor0(m, std::max(check.t, ws));
    return finish(check);
}

BoundCheck check_mixed_bounds(const GeneratingSet& g, const ReductionIndices& w_rows, const ReductionIndices& w_cols,
                              bool force, const QualityOptions& opts) {
    require_sequence(g, force);
    const std::size_t m = g.m();
    auto check = base_check(g, mixed_reduce(g, w_rows, w_cols, quiet(true)), opts);
    const std::size_t wr = clamp_to(w_rows.last(), m);
    const std::size_t wc = clamp_to(w_cols.last(), m);
    const std::size_t worst = std::max(wc + check.t, wr);
    check.rho_lower = sub_floor0(m, worst);
    check.rho_upper = sub_floor0(m, std::max(wc, wr));
    check.t_upper = std::min(m, worst);
    return finish(check);
}

std::vector<ProjectionBoundCheck> check_projection_bounds(const GeneratingSet& g, const ReductionIndices& w,
                                                          ReductionKind kind, bool force, const QualityOptions& opts) {
    if (kind == ReductionKind::mixed) throw ValidationError("projection bounds are defined for row, column, column_row");
    if (kind != ReductionKind::row) require_sequence(g, force);
    if (g.s() > opts.projection_limit) {
        throw BudgetError(fmt::format("s = {} exceeds the projection limit {}", g.s(), opts.projection_limit));
    }
    const std::size_t m = g.m();
    const auto reduced = reduce(g, kind, w, quiet(true));

    std::vector<ProjectionBoundCheck> out;
    for (auto& u : nonempty_subsets(g.s())) {
        ProjectionBoundCheck check;
        check.t_u = projection_t(g, u, opts);
        check.rho_reduced = rho_m(reduced.project(u), opts);
        check.t_reduced = m - check.rho_reduced;
        const std::size_t wu = clamp_to(w[u.back()], m);
        const std::size_t worst = kind == ReductionKind::row ? std::max(wu, check.t_u) : wu + check.t_u;
        check.rho_lower = sub_floor0(m, worst);
        check.rho_upper = sub_floor0(m, wu);
        check.t_upper = std::min(m, worst);
        check.pass = check.rho_lower <= check.rho_reduced && check.rho_reduced <= check.rho_upper &&
                     check.t_reduced <= check.t_upper;
        check.u = std::move(u);
        out.push_back(std::move(check));
    }
    return out;
}

} // namespace rdn
