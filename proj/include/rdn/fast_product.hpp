#pragma once

#include "rdn/digital_net.hpp"
#include "rdn/errors.hpp"
#include "rdn/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace rdn {

/// Dense row-major matrix. `double` in production; tests also instantiate an exact rational type.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows * cols) throw ValidationError("matrix data has the wrong size");
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    [[nodiscard]] const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    [[nodiscard]] T* row(std::size_t i) noexcept { return data_.data() + i * cols_; }
    [[nodiscard]] const T* row(std::size_t i) const noexcept { return data_.data() + i * cols_; }
    [[nodiscard]] const std::vector<T>& data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using DenseMatrix = Matrix<double>;

/// Rejects NaN and infinite entries.
void require_finite(const DenseMatrix& a, std::string_view what);

/**
 * Instrumented operation counts under sequential reference semantics.
 * scalar_mults and scalar_adds count real arithmetic on the product;
 * table_lookups counts row-reduced table reads; digit_ops counts digit
 * multiply-adds spent generating points.
 */
struct OpCounts {
    std::uint64_t scalar_mults = 0;
    std::uint64_t scalar_adds = 0;
    std::uint64_t table_lookups = 0;
    std::uint64_t digit_ops = 0;

    friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

template <typename T>
struct ProductResult {
    Matrix<T> value;
    OpCounts counts;
    /// Column algorithms: rows held by the accumulator before the final tiling (b^(m - w_1)), 0 if s* = 0.
    std::uint64_t accumulator_rows = 0;
};

enum class ProductAlgorithm { standard, row, column, column_row };

std::string_view to_string(ProductAlgorithm algo);
ProductAlgorithm parse_product_algorithm(std::string_view name);

/// The reduction whose net a fast algorithm multiplies by.
ReductionKind reduction_for(ProductAlgorithm algo);

/// The quantities inside the asymptotic O(.) cost estimates, evaluated with constant 1.
struct TheoreticalCosts {
    double generation = 0;
    double product = 0;
    [[nodiscard]] double total() const noexcept { return generation + product; }
};

/**
 * standard:   generation s b^m m^2,                   product b^m s tau
 * row:        generation sum_{j<=s*} b^m m (m-w_j),    product sum_{j<=s*} b^(m-w_j) tau
 * column:     generation sum_{j<=s*} b^(m-w_j) m (m-w_j), same product
 * column_row: generation sum_{j<=s*} b^(m-w_j) (m-w_j)^2, same product
 */
TheoreticalCosts theoretical_costs(Digit b, std::size_t m, std::size_t s, std::size_t tau, const ReductionIndices& w,
                                   ProductAlgorithm algo);

namespace detail {

template <typename T>
T ratio(std::uint64_t num, std::uint64_t den) {
    return T(num) / T(den);
}

inline void require_rows(const GeneratingSet& g, std::size_t a_rows, const ReductionIndices& w) {
    if (a_rows != g.s()) throw ValidationError("A must have s rows");
    if (w.size() != g.s()) throw ValidationError("w must have s entries");
}

inline void require_sequence(const GeneratingSet& g, bool force) {
    if (!g.from_sequence() && !force) {
        throw ValidationError("column-reduced products need matrices derived from a (t,s)-sequence");
    }
}

// Column and column-row reduced products. Only the first m - w_j digits of k
// matter for coordinate j, so its column is b^(w_j) stacked copies of a block
// X_j of b^(m-w_j) points. An accumulator is built from j = s* downwards, tiled
// up whenever w drops, and tiled to b^m rows at the end.
template <typename T>
ProductResult<T> column_type_product(const GeneratingSet& g, const ReductionIndices& w, const Matrix<T>& a,
                                     bool trim_rows) {
    const Digit b = g.modulus();
    const std::size_t m = g.m();
    const std::size_t tau = a.cols();
    const std::uint64_t n = checked_pow(b, m);
    const std::size_t active = s_star(w, m);

    ProductResult<T> result;
    if (active == 0) {
        result.value = Matrix<T>(n, tau);
        return result;
    }

    std::vector<T> acc;
    std::uint64_t acc_rows = 0;
    for (std::size_t j = active; j-- > 0;) {
        const std::size_t free_digits = m - static_cast<std::size_t>(w[j]);
        const std::uint64_t block = checked_pow(b, free_digits);

        // Tile the accumulator up to this coordinate's block length.
        if (acc_rows != 0 && acc_rows < block) {
            acc.resize(block * tau);
            for (std::uint64_t r = acc_rows; r < block; ++r) {
                std::copy_n(acc.begin() + static_cast<std::ptrdiff_t>((r % acc_rows) * tau), tau,
                            acc.begin() + static_cast<std::ptrdiff_t>(r * tau));
            }
        }
        const bool first = acc_rows == 0;
        if (first) acc.assign(block * tau, T(0));
        acc_rows = block;

        const CoordinateGenerator gen(g.matrix(j), trim_rows ? free_digits : m, free_digits);
        const T* a_row = a.row(j);
        DigitCounter k(b, free_digits);
        for (std::uint64_t idx = 0; idx < block; ++idx, k.advance()) {
            const T x = ratio<T>(gen(k.digits()), n);
            T* out = acc.data() + idx * tau;
            if (first) {
                for (std::size_t l = 0; l < tau; ++l) out[l] = x * a_row[l];
            } else {
                for (std::size_t l = 0; l < tau; ++l) out[l] += x * a_row[l];
            }
        }
        result.counts.digit_ops += block * gen.ops_per_point();
        result.counts.scalar_mults += block * tau;
        if (!first) result.counts.scalar_adds += block * tau;
    }

    result.accumulator_rows = acc_rows;
    result.value = Matrix<T>(n, tau);
    for (std::uint64_t r = 0; r < n; ++r) {
        std::copy_n(acc.begin() + static_cast<std::ptrdiff_t>((r % acc_rows) * tau), tau, result.value.row(r));
    }
    return result;
}

} // namespace detail

/// Point matrix X (N x s) of a net, entries numerator / b^m.
template <typename T = double>
Matrix<T> point_matrix(const DigitalNet& net) {
    Matrix<T> x(net.size(), net.s());
    for (std::uint64_t k = 0; k < net.size(); ++k) {
        for (std::size_t j = 0; j < net.s(); ++j) x(k, j) = detail::ratio<T>(net.numerator(k, j), net.denominator());
    }
    return x;
}

/// Triple loop in fixed (k, j, l) order; N s tau multiplications.
template <typename T>
ProductResult<T> standard_product(const Matrix<T>& x, const Matrix<T>& a) {
    if (x.cols() != a.rows()) throw ValidationError("standard_product: cols(X) != rows(A)");
    ProductResult<T> result;
    result.value = Matrix<T>(x.rows(), a.cols());
    for (std::size_t k = 0; k < x.rows(); ++k) {
        T* out = result.value.row(k);
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const T xkj = x(k, j);
            const T* a_row = a.row(j);
            for (std::size_t l = 0; l < a.cols(); ++l) out[l] += xkj * a_row[l];
        }
    }
    const std::uint64_t work = std::uint64_t{x.rows()} * x.cols() * a.cols();
    result.counts.scalar_mults = work;
    result.counts.scalar_adds = work;
    return result;
}

/// Generates the full net of `g` with the dense m x m kernel, then runs standard_product.
/// digit_ops records the s b^m m^2 generation work.
template <typename T>
ProductResult<T> standard_net_product(const GeneratingSet& g, const Matrix<T>& a) {
    const auto net = generate_net(g);
    auto result = standard_product(point_matrix<T>(net), a);
    result.counts.digit_ops = net.size() * g.s() * g.m() * g.m();
    return result;
}

/**
 * Product with the net of row_reduce(g, w). Coordinate j <= s* takes only
 * b^(m-w_j) distinct values, so the rows c_i = (i / b^(m-w_j)) a_j are
 * tabulated once and row k reads entry numerator(k, j) / b^(w_j). Coordinates
 * beyond s* are identically zero and skipped. Accumulation is in ascending j.
 */
template <typename T>
ProductResult<T> row_reduced_product(const GeneratingSet& g, const ReductionIndices& w, const Matrix<T>& a) {
    detail::require_rows(g, a.rows(), w);
    const Digit b = g.modulus();
    const std::size_t m = g.m();
    const std::size_t tau = a.cols();
    const std::uint64_t n = checked_pow(b, m);
    const std::size_t active = s_star(w, m);

    ProductResult<T> result;
    result.value = Matrix<T>(n, tau);
    std::vector<T> table;
    for (std::size_t j = 0; j < active; ++j) {
        const std::size_t kept = m - static_cast<std::size_t>(w[j]);
        const std::uint64_t levels = checked_pow(b, kept);
        const std::uint64_t shift = checked_pow(b, w[j]);

        table.resize(levels * tau);
        const T* a_row = a.row(j);
        for (std::uint64_t i = 0; i < levels; ++i) {
            const T x = detail::ratio<T>(i, levels);
            for (std::size_t l = 0; l < tau; ++l) table[i * tau + l] = x * a_row[l];
        }
        result.counts.scalar_mults += levels * tau;

        const CoordinateGenerator gen(g.matrix(j), kept, m);
        DigitCounter k(b, m);
        for (std::uint64_t idx = 0; idx < n; ++idx, k.advance()) {
            const T* entry = table.data() + (gen(k.digits()) / shift) * tau;
            T* out = result.value.row(idx);
            for (std::size_t l = 0; l < tau; ++l) out[l] += entry[l];
        }
        result.counts.table_lookups += n;
        result.counts.scalar_adds += n * tau;
        result.counts.digit_ops += n * gen.ops_per_point();
    }
    return result;
}

/// Product with the net of column_reduce(g, w). Requires g.from_sequence() unless `force`.
template <typename T>
ProductResult<T> column_reduced_product(const GeneratingSet& g, const ReductionIndices& w, const Matrix<T>& a,
                                        bool force = false) {
    detail::require_rows(g, a.rows(), w);
    detail::require_sequence(g, force);
    return detail::column_type_product(g, w, a, false);
}

/// Product with the net of column_row_reduce(g, w); points come from the
/// (m-w_j) x (m-w_j) leading block only.
template <typename T>
ProductResult<T> column_row_reduced_product(const GeneratingSet& g, const ReductionIndices& w, const Matrix<T>& a,
                                            bool force = false) {
    detail::require_rows(g, a.rows(), w);
    detail::require_sequence(g, force);
    return detail::column_type_product(g, w, a, true);
}

/// Runs `algo`; the standard algorithm multiplies by the unreduced net of `g`.
ProductResult<double> run_product(ProductAlgorithm algo, const GeneratingSet& g, const ReductionIndices& w,
                                  const DenseMatrix& a, bool force = false);

/// max over entries of |x - y| / sum_j |X_kj A_jl|: the error relative to the
/// magnitude of the summands of each entry (0 where that magnitude is 0 and x == y).
double max_relative_error(const DenseMatrix& x, const DenseMatrix& y, const DenseMatrix& points,
                          const DenseMatrix& a);

} // namespace rdn
