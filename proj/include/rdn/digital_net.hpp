#pragma once

#include "rdn/gf_matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rdn {

/// b^e, throwing BudgetError if the result does not fit in 64 bits.
std::uint64_t checked_pow(std::uint64_t b, std::uint64_t e);

/// Digits (k_0, ..., k_{m-1}) of k in base b, least significant first.
DigitVector digits_of(std::uint64_t k, Digit b, std::size_t m);

/**
 * The s generating matrices of a digital net over F_b, each m x m.
 *
 * `from_sequence` records that the matrices are upper-left sections of the
 * generating matrices of a digital (t,s)-sequence; column-type reductions
 * only carry quality guarantees under that condition.
 */
class GeneratingSet {
public:
    GeneratingSet(Digit b, std::size_t m, std::vector<GfMatrix> matrices, bool from_sequence);

    [[nodiscard]] Digit modulus() const noexcept { return b_; }
    [[nodiscard]] std::size_t m() const noexcept { return m_; }
    [[nodiscard]] std::size_t s() const noexcept { return matrices_.size(); }
    [[nodiscard]] bool from_sequence() const noexcept { return from_sequence_; }
    [[nodiscard]] const GfMatrix& matrix(std::size_t j) const { return matrices_.at(j); }
    [[nodiscard]] const std::vector<GfMatrix>& matrices() const noexcept { return matrices_; }

    /// The generating set restricted to the coordinates in `u` (0-based, any order).
    [[nodiscard]] GeneratingSet project(std::span<const std::size_t> u) const;

    friend bool operator==(const GeneratingSet&, const GeneratingSet&) = default;

private:
    Digit b_;
    std::size_t m_;
    std::vector<GfMatrix> matrices_;
    bool from_sequence_;
};

/**
 * The b^m points of a digital net as exact integer numerators over b^m.
 * Row k, column j holds b^m * x_{k,j}.
 */
class DigitalNet {
public:
    DigitalNet(Digit b, std::size_t m, std::size_t s, std::vector<std::uint64_t> numerators);

    [[nodiscard]] Digit modulus() const noexcept { return b_; }
    [[nodiscard]] std::size_t m() const noexcept { return m_; }
    [[nodiscard]] std::size_t s() const noexcept { return s_; }
    [[nodiscard]] std::uint64_t size() const noexcept { return n_; }
    [[nodiscard]] std::uint64_t denominator() const noexcept { return n_; }

    [[nodiscard]] std::uint64_t numerator(std::uint64_t k, std::size_t j) const noexcept {
        return numerators_[k * s_ + j];
    }
    [[nodiscard]] double value(std::uint64_t k, std::size_t j) const noexcept {
        return static_cast<double>(numerator(k, j)) / static_cast<double>(n_);
    }
    [[nodiscard]] std::span<const std::uint64_t> numerators() const noexcept { return numerators_; }

    friend bool operator==(const DigitalNet&, const DigitalNet&) = default;

private:
    Digit b_;
    std::size_t m_;
    std::size_t s_;
    std::uint64_t n_;
    std::vector<std::uint64_t> numerators_;
};

/// Upper bound on N * s table entries a generated net may hold.
inline constexpr std::uint64_t max_net_entries = std::uint64_t{1} << 28;

DigitalNet generate_net(const GeneratingSet& g);

/// Entries i.i.d. uniform on F_b drawn from std::mt19937_64(seed), matrix by
/// matrix, row-major, with rejection sampling to remove modulo bias.
GeneratingSet random_generating_set(Digit b, std::size_t m, std::size_t s, std::uint64_t seed);

/// Every matrix the m x m identity.
GeneratingSet identity_generating_set(Digit b, std::size_t m, std::size_t s);

/// C_j = P^(j-1) mod b with P the upper-triangular Pascal matrix
/// (entry (i, r) = binom(r, i), 0-based). Requires s <= b; yields a (0,m,s)-net.
GeneratingSet pascal_generating_set(Digit b, std::size_t m, std::size_t s);

/**
 * Maps the base-b digit vector of an index to the numerator of one point
 * coordinate, using only the leading `active_rows` x `active_cols` block of
 * the generating matrix. Rows beyond the block contribute zero digits.
 *
 * This is the point-generation step shared by net generation and the
 * structured products; its cost is active_rows * active_cols digit
 * multiply-adds per point.
 */
class CoordinateGenerator {
public:
    CoordinateGenerator(const GfMatrix& c, std::size_t active_rows, std::size_t active_cols);

    [[nodiscard]] std::uint64_t operator()(std::span<const Digit> digits) const noexcept {
        std::uint64_t numerator = 0;
        for (std::size_t i = 0; i < rows_; ++i) {
            const Digit* row = block_.data() + i * cols_;
            std::uint64_t acc = 0;
            for (std::size_t r = 0; r < cols_; ++r) acc += static_cast<std::uint64_t>(row[r]) * digits[r];
            numerator += (acc % b_) * weights_[i];
        }
        return numerator;
    }

    [[nodiscard]] std::uint64_t ops_per_point() const noexcept { return rows_ * cols_; }

private:
    std::uint64_t b_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Digit> block_;
    std::vector<std::uint64_t> weights_; // b^(m-1-i)
};

/// Odometer over base-b digit vectors of 0, 1, 2, ... (least significant first).
class DigitCounter {
public:
    DigitCounter(Digit b, std::size_t m) : b_(b), digits_(m, 0) {}

    [[nodiscard]] std::span<const Digit> digits() const noexcept { return digits_; }

    void advance() noexcept {
        for (auto& d : digits_) {
            if (++d < b_) return;
            d = 0;
        }
    }

private:
    Digit b_;
    DigitVector digits_;
};

} // namespace rdn
