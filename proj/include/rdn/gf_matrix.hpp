#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rdn {

/// A single element of F_b, always kept in {0, ..., b-1}.
using Digit = std::uint32_t;
using DigitVector = std::vector<Digit>;

/// Trial division. Suitable for the small moduli used by digital nets.
bool is_prime(std::uint64_t n);

/// Throws ValidationError unless b is a prime in [2, 2^31).
void require_prime_modulus(std::uint64_t b);

/// Multiplicative inverse of a nonzero element of F_b.
Digit inverse_mod(Digit a, Digit b);

/**
 * Dense matrix over the prime field F_b, row-major, one digit per entry.
 *
 * Values are immutable once built apart from the explicit `set`, which
 * validates the digit range. All free functions below are pure.
 */
class GfMatrix {
public:
    GfMatrix(Digit b, std::size_t rows, std::size_t cols);
    GfMatrix(Digit b, std::size_t rows, std::size_t cols, std::vector<Digit> entries);

    static GfMatrix identity(Digit b, std::size_t n);

    [[nodiscard]] Digit modulus() const noexcept { return b_; }
    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    [[nodiscard]] Digit operator()(std::size_t i, std::size_t r) const noexcept {
        return entries_[i * cols_ + r];
    }
    void set(std::size_t i, std::size_t r, Digit value);

    [[nodiscard]] std::span<const Digit> row(std::size_t i) const noexcept {
        return {entries_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<const Digit> entries() const noexcept { return entries_; }

    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] GfMatrix transpose() const;

    friend bool operator==(const GfMatrix&, const GfMatrix&) = default;

private:
    Digit b_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Digit> entries_;
};

/// Rank over F_b by Gaussian elimination, first nonzero pivot in column order.
std::size_t rank(const GfMatrix& m);

/// True iff the given row vectors are linearly independent over F_b.
/// The empty system is independent.
bool rows_independent(std::span<const DigitVector> rows, Digit b);

/// Exact product M v over F_b.
DigitVector mat_vec(const GfMatrix& m, std::span<const Digit> v);

GfMatrix mat_mul(const GfMatrix& lhs, const GfMatrix& rhs);

/**
 * Incrementally maintained row-echelon basis over F_b.
 *
 * Each stored row is normalised to a leading one at its pivot, and later
 * rows are reduced against earlier ones, so reducing a candidate against
 * the rows in insertion order clears every pivot column.
 */
class EchelonBasis {
public:
    EchelonBasis(Digit b, std::size_t length);

    /// Adds `v` if it is independent of the current span. Returns false
    /// (leaving the basis unchanged) if it is dependent.
    bool insert(std::span<const Digit> v);

    [[nodiscard]] std::size_t size() const noexcept { return pivots_.size(); }
    [[nodiscard]] std::size_t length() const noexcept { return length_; }

private:
    Digit b_;
    std::size_t length_;
    std::vector<Digit> rows_;
    std::vector<std::size_t> pivots_;
    std::vector<Digit> scratch_;
};

} // namespace rdn
