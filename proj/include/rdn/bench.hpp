#pragma once

#include "rdn/fast_product.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rdn {

struct BenchConfig {
    Digit b = 2;
    std::vector<std::size_t> m_values{12};
    std::vector<std::size_t> s_values{50};
    std::size_t tau = 20;
    /// "log2", "log2sqrt", "zero" or an explicit comma list (then every s must match its length).
    std::string schedule = "log2";
    std::vector<ProductAlgorithm> algorithms{ProductAlgorithm::standard, ProductAlgorithm::row,
                                             ProductAlgorithm::column, ProductAlgorithm::column_row};
    std::size_t repetitions = 5;
    std::uint64_t seed = 1;
    /// Largest b^m * s accepted; bigger configurations are rejected up front.
    std::uint64_t max_cells = std::uint64_t{1} << 26;
};

struct BenchRow {
    ProductAlgorithm algo = ProductAlgorithm::standard;
    Digit b = 2;
    std::size_t m = 0;
    std::size_t s = 0;
    std::size_t tau = 0;
    std::string schedule;
    std::uint64_t wall_ns_median = 0;
    std::uint64_t mults = 0;
    std::uint64_t adds = 0;
    double theory = 0;
};

/// Throws ValidationError for empty ranges or zero repetitions, BudgetError for oversized points.
void validate(const BenchConfig& config);

/**
 * Times point generation plus the product for every (m, s, algorithm), single
 * threaded: one warm-up run, then the median of `repetitions` runs. Generating
 * matrices are random from `seed`; the structured algorithms only read the
 * zero pattern, so the column-type kernels are timed on them as well.
 */
std::vector<BenchRow> run_bench(const BenchConfig& config);

/// Header `algo,b,m,s,tau,schedule,wall_ns_median,mults,adds,theory`.
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
std::vector<BenchRow> read_bench_csv(std::istream& in);

/**
 * Self-contained SVG line chart of wall_ns_median (log y axis) against s, or
 * against m when s is constant, one polyline per algorithm. A pure function of
 * the rows.
 */
std::string render_svg(const std::vector<BenchRow>& rows);

} // namespace rdn
