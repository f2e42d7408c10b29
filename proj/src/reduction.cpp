#include "rdn/reduction.hpp"

#include "rdn/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fmt/format.h>
#include <iostream>
#include <utility>

namespace rdn {

std::string_view to_string(ReductionKind kind) {
    switch (kind) {
    case ReductionKind::row: return "row";
    case ReductionKind::column: return "column";
    case ReductionKind::column_row: return "column_row";
    case ReductionKind::mixed: return "mixed";
    }
    return "?";
}

ReductionKind parse_reduction_kind(std::string_view name) {
    if (name == "row") return ReductionKind::row;
    if (name == "column") return ReductionKind::column;
    if (name == "column_row") return ReductionKind::column_row;
    if (name == "mixed") return ReductionKind::mixed;
    throw ValidationError(fmt::format("unknown reduction kind '{}'", name));
}

ReductionIndices::ReductionIndices(std::vector<std::uint64_t> w) : w_(std::move(w)) {
    if (w_.empty()) throw ValidationError("reduction indices must not be empty");
    if (!std::is_sorted(w_.begin(), w_.end())) {
        throw ValidationError("reduction indices must be non-decreasing");
    }
}

ReductionIndices ReductionIndices::zeros(std::size_t s) {
    return ReductionIndices(std::vector<std::uint64_t>(s, 0));
}

namespace {

// Largest e with b^(e * root) <= j, i.e. floor(log_b(j^(1/root))), capped at m.
std::uint64_t floor_log(std::uint64_t j, Digit b, unsigned root, std::size_t m) {
    std::uint64_t e = 0;
    std::uint64_t power = 1; // b^(e * root)
    while (e < m) {
        std::uint64_t next = power;
        for (unsigned r = 0; r < root; ++r) {
            if (next > j / b) return e;
            next *= b;
        }
        power = next;
        ++e;
    }
    return e;
}

ReductionIndices log_indices(Digit b, std::size_t m, std::size_t s, unsigned root) {
    require_prime_modulus(b);
    std::vector<std::uint64_t> w(s);
    for (std::size_t j = 0; j < s; ++j) w[j] = floor_log(j + 1, b, root, m);
    return ReductionIndices(std::move(w));
}

void require_length(const GeneratingSet& g, const ReductionIndices& w, std::string_view what) {
    if (w.size() != g.s()) {
        throw ValidationError(fmt::format("{} has {} entries but s = {}", what, w.size(), g.s()));
    }
}

void lint_first_index(const ReductionIndices& w, const ReduceOptions& opts) {
    if (w[0] != 0 && opts.warn) {
        opts.warn(fmt::format("w_1 = {} > 0; quality bounds are stated for w_1 = 0", w[0]));
    }
}

void require_sequence(const GeneratingSet& g, const ReduceOptions& opts) {
    if (g.from_sequence()) return;
    if (!opts.force) {
        throw ValidationError(
            "column reduction requires generating matrices derived from a (t,s)-sequence (use force to override)");
    }
    if (opts.warn) opts.warn("column reduction of matrices not derived from a sequence; quality bounds do not apply");
}

// Keeps entry (i, r) of matrix j iff i < m - min(m, rows_j) and r < m - min(m, cols_j).
GeneratingSet zero_tail(const GeneratingSet& g, const ReductionIndices& w_rows, const ReductionIndices& w_cols) {
    const std::size_t m = g.m();
    std::vector<GfMatrix> out;
    out.reserve(g.s());
    for (std::size_t j = 0; j < g.s(); ++j) {
        const auto& c = g.matrix(j);
        const std::size_t keep_rows = m - w_rows.clamped(j, m);
        const std::size_t keep_cols = m - w_cols.clamped(j, m);
        GfMatrix reduced(g.modulus(), m, m);
        for (std::size_t i = 0; i < keep_rows; ++i) {
            for (std::size_t r = 0; r < keep_cols; ++r) reduced.set(i, r, c(i, r));
        }
        out.push_back(std::move(reduced));
    }
    return GeneratingSet(g.modulus(), m, std::move(out), g.from_sequence());
}

bool any_positive(const ReductionIndices& w) { return w.last() > 0; }

} // namespace

ReductionIndices log_schedule(Digit b, std::size_t m, std::size_t s) { return log_indices(b, m, s, 1); }

ReductionIndices log_sqrt_schedule(Digit b, std::size_t m, std::size_t s) { return log_indices(b, m, s, 2); }

ReductionIndices parse_indices(std::string_view text, Digit b, std::size_t m, std::size_t s) {
    if (text == "log2") return log_schedule(b, m, s);
    if (text == "log2sqrt") return log_sqrt_schedule(b, m, s);
    if (text == "zero") return ReductionIndices::zeros(s);

    std::vector<std::uint64_t> w;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        std::uint64_t value = 0;
        const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc{} || end != item.data() + item.size() || item.empty()) {
            throw ValidationError(fmt::format("bad reduction index '{}'", item));
        }
        w.push_back(value);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (w.size() != s) throw ValidationError(fmt::format("expected {} reduction indices, got {}", s, w.size()));
    return ReductionIndices(std::move(w));
}

std::size_t s_star(const ReductionIndices& w, std::size_t m) {
    // w is sorted, so the coordinates with w_j < m form a prefix.
    const auto& v = w.values();
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), std::uint64_t{m}) - v.begin());
}

void stderr_warning(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

GeneratingSet row_reduce(const GeneratingSet& g, const ReductionIndices& w, const ReduceOptions& opts) {
    require_length(g, w, "w");
    lint_first_index(w, opts);
    return zero_tail(g, w, ReductionIndices::zeros(g.s()));
}

GeneratingSet column_reduce(const GeneratingSet& g, const ReductionIndices& w, const ReduceOptions& opts) {
    require_length(g, w, "w");
    lint_first_index(w, opts);
    if (any_positive(w)) require_sequence(g, opts);
    return zero_tail(g, ReductionIndices::zeros(g.s()), w);
}

GeneratingSet column_row_reduce(const GeneratingSet& g, const ReductionIndices& w, const ReduceOptions& opts) {
    require_length(g, w, "w");
    lint_first_index(w, opts);
    if (any_positive(w)) require_sequence(g, opts);
    return zero_tail(g, w, w);
}

GeneratingSet mixed_reduce(const GeneratingSet& g, const ReductionIndices& w_rows, const ReductionIndices& w_cols,
                           const ReduceOptions& opts) {
    require_length(g, w_rows, "w_rows");
    require_length(g, w_cols, "w_cols");
    lint_first_index(w_rows, opts);
    lint_first_index(w_cols, opts);
    if (any_positive(w_cols)) require_sequence(g, opts);
    return zero_tail(g, w_rows, w_cols);
}

GeneratingSet reduce(const GeneratingSet& g, ReductionKind kind, const ReductionIndices& w, const ReduceOptions& opts) {
    switch (kind) {
    case ReductionKind::row: return row_reduce(g, w, opts);
    case ReductionKind::column: return column_reduce(g, w, opts);
    case ReductionKind::column_row: return column_row_reduce(g, w, opts);
    case ReductionKind::mixed: break;
    }
    throw ValidationError("mixed reduction needs separate row and column indices");
}

} // namespace rdn
