#pragma once

#include "rdn/digital_net.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace rdn {

enum class ReductionKind { row, column, column_row, mixed };

std::string_view to_string(ReductionKind kind);
ReductionKind parse_reduction_kind(std::string_view name);

/**
 * Non-decreasing reduction indices w_1 <= ... <= w_s.
 *
 * Values are stored as given; anything at or above m zeroes the whole
 * matrix, and `clamped` applies min(m, w_j). Indexing is 0-based.
 */
class ReductionIndices {
public:
    explicit ReductionIndices(std::vector<std::uint64_t> w);

    static ReductionIndices zeros(std::size_t s);

    [[nodiscard]] std::size_t size() const noexcept { return w_.size(); }
    [[nodiscard]] std::uint64_t operator[](std::size_t j) const noexcept { return w_[j]; }
    [[nodiscard]] std::uint64_t last() const noexcept { return w_.back(); }
    [[nodiscard]] std::size_t clamped(std::size_t j, std::size_t m) const noexcept {
        return w_[j] < m ? static_cast<std::size_t>(w_[j]) : m;
    }
    [[nodiscard]] const std::vector<std::uint64_t>& values() const noexcept { return w_; }

    friend bool operator==(const ReductionIndices&, const ReductionIndices&) = default;

private:
    std::vector<std::uint64_t> w_;
};

/// w_j = min(floor(log_b j), m), j = 1..s.
ReductionIndices log_schedule(Digit b, std::size_t m, std::size_t s);
/// w_j = min(floor(log_b sqrt(j)), m), j = 1..s.
ReductionIndices log_sqrt_schedule(Digit b, std::size_t m, std::size_t s);

/// Accepts "log2", "log2sqrt", "zero" or an explicit comma-separated list.
ReductionIndices parse_indices(std::string_view text, Digit b, std::size_t m, std::size_t s);

/// Number of leading coordinates with w_j < m (s*); 0 if none.
std::size_t s_star(const ReductionIndices& w, std::size_t m);

using WarningSink = std::function<void(const std::string&)>;

/// Writes "warning: <message>" to stderr.
void stderr_warning(const std::string& message);

struct ReduceOptions {
    /// Allow column-type reductions of matrices not derived from a sequence.
    bool force = false;
    WarningSink warn = stderr_warning;
};

GeneratingSet row_reduce(const GeneratingSet& g, const ReductionIndices& w, const ReduceOptions& opts = {});
GeneratingSet column_reduce(const GeneratingSet& g, const ReductionIndices& w, const ReduceOptions& opts = {});
GeneratingSet column_row_reduce(const GeneratingSet& g, const ReductionIndices& w,
                                const ReduceOptions& opts = {});
GeneratingSet mixed_reduce(const GeneratingSet& g, const ReductionIndices& w_rows,
                           const ReductionIndices& w_cols, const ReduceOptions& opts = {});

/// Dispatches to the single-index reductions; `mixed` is rejected here.
GeneratingSet reduce(const GeneratingSet& g, ReductionKind kind, const ReductionIndices& w,
                     const ReduceOptions& opts = {});

} // namespace rdn
