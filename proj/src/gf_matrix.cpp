#include "rdn/gf_matrix.hpp"

#include "rdn/errors.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <utility>

namespace rdn {

namespace {

Digit mul_mod(Digit a, Digit c, Digit b) {
    return static_cast<Digit>((static_cast<std::uint64_t>(a) * c) % b);
}

Digit sub_mod(Digit a, Digit c, Digit b) { return a >= c ? a - c : a + (b - c); }

// Subtract factor * src from dst, entries from `from` onwards.
void axpy_mod(std::span<Digit> dst, std::span<const Digit> src, Digit factor, Digit b,
              std::size_t from) {
    for (std::size_t r = from; r < dst.size(); ++r) {
        if (src[r] != 0) dst[r] = sub_mod(dst[r], mul_mod(factor, src[r], b), b);
    }
}

} // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

void require_prime_modulus(std::uint64_t b) {
    if (b >= (std::uint64_t{1} << 31)) {
        throw ValidationError(fmt::format("modulus {} too large", b));
    }
    if (!is_prime(b)) throw ValidationError(fmt::format("modulus {} is not prime", b));
}

Digit inverse_mod(Digit a, Digit b) {
    // Extended Euclid on signed 64-bit values.
    std::int64_t r0 = b, r1 = a % b;
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        r0 = std::exchange(r1, r0 - q * r1);
        s0 = std::exchange(s1, s0 - q * s1);
    }
    if (r0 != 1) throw ValidationError(fmt::format("{} is not invertible mod {}", a, b));
    if (s0 < 0) s0 += b;
    return static_cast<Digit>(s0);
}

GfMatrix::GfMatrix(Digit b, std::size_t rows, std::size_t cols)
    : b_(b), rows_(rows), cols_(cols), entries_(rows * cols, 0) {
    require_prime_modulus(b);
}

GfMatrix::GfMatrix(Digit b, std::size_t rows, std::size_t cols, std::vector<Digit> entries)
    : b_(b), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    require_prime_modulus(b);
    if (entries_.size() != rows * cols) {
        throw ValidationError(fmt::format("expected {}x{} = {} entries, got {}", rows, cols,
                                          rows * cols, entries_.size()));
    }
    for (const Digit e : entries_) {
        if (e >= b) throw ValidationError(fmt::format("entry {} outside F_{}", e, b));
    }
}

GfMatrix GfMatrix::identity(Digit b, std::size_t n) {
    GfMatrix id(b, n, n);
    for (std::size_t i = 0; i < n; ++i) id.entries_[i * n + i] = 1;
    return id;
}

void GfMatrix::set(std::size_t i, std::size_t r, Digit value) {
    if (i >= rows_ || r >= cols_) throw ValidationError("matrix index out of range");
    if (value >= b_) throw ValidationError(fmt::format("entry {} outside F_{}", value, b_));
    entries_[i * cols_ + r] = value;
}

bool GfMatrix::is_zero() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](Digit e) { return e == 0; });
}

GfMatrix GfMatrix::transpose() const {
    GfMatrix t(b_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t r = 0; r < cols_; ++r) t.entries_[r * rows_ + i] = (*this)(i, r);
    }
    return t;
}

std::size_t rank(const GfMatrix& m) {
    const Digit b = m.modulus();
    std::vector<Digit> work(m.entries().begin(), m.entries().end());
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    auto row = [&](std::size_t i) { return std::span<Digit>(work.data() + i * cols, cols); };

    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && work[pivot * cols + c] == 0) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rank) std::swap_ranges(row(pivot).begin(), row(pivot).end(), row(rank).begin());

        const Digit inv = inverse_mod(work[rank * cols + c], b);
        for (std::size_t r = c; r < cols; ++r) work[rank * cols + r] = mul_mod(work[rank * cols + r], inv, b);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            const Digit factor = work[i * cols + c];
            if (factor != 0) axpy_mod(row(i), row(rank), factor, b, c);
        }
        ++rank;
    }
    return rank;
}

bool rows_independent(std::span<const DigitVector> rows, Digit b) {
    if (rows.empty()) return true;
    const std::size_t length = rows.front().size();
    EchelonBasis basis(b, length);
    for (const auto& v : rows) {
        if (v.size() != length) {
            throw ValidationError(fmt::format("row length {} differs from {}", v.size(), length));
        }
        if (!basis.insert(v)) return false;
    }
    return true;
}

DigitVector mat_vec(const GfMatrix& m, std::span<const Digit> v) {
    if (v.size() != m.cols()) {
        throw ValidationError(
            fmt::format("mat_vec: vector length {} but matrix has {} columns", v.size(), m.cols()));
    }
    const Digit b = m.modulus();
    DigitVector out(m.rows(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::uint64_t acc = 0;
        for (std::size_t r = 0; r < m.cols(); ++r) {
            if (v[r] >= b) throw ValidationError(fmt::format("digit {} outside F_{}", v[r], b));
            acc = (acc + static_cast<std::uint64_t>(m(i, r)) * v[r]) % b;
        }
        out[i] = static_cast<Digit>(acc);
    }
    return out;
}

GfMatrix mat_mul(const GfMatrix& lhs, const GfMatrix& rhs) {
    if (lhs.modulus() != rhs.modulus() || lhs.cols() != rhs.rows()) {
        throw ValidationError("mat_mul: incompatible operands");
    }
    const Digit b = lhs.modulus();
    std::vector<Digit> out(lhs.rows() * rhs.cols(), 0);
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        for (std::size_t r = 0; r < rhs.cols(); ++r) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < lhs.cols(); ++k) {
                acc = (acc + static_cast<std::uint64_t>(lhs(i, k)) * rhs(k, r)) % b;
            }
            out[i * rhs.cols() + r] = static_cast<Digit>(acc);
        }
    }
    return GfMatrix(b, lhs.rows(), rhs.cols(), std::move(out));
}

EchelonBasis::EchelonBasis(Digit b, std::size_t length) : b_(b), length_(length), scratch_(length) {
    rows_.reserve(length * length);
}

bool EchelonBasis::insert(std::span<const Digit> v) {
    if (v.size() != length_) {
        throw ValidationError(fmt::format("row length {} differs from {}", v.size(), length_));
    }
    std::copy(v.begin(), v.end(), scratch_.begin());
    for (std::size_t k = 0; k < pivots_.size(); ++k) {
        const Digit factor = scratch_[pivots_[k]];
        if (factor == 0) continue;
        axpy_mod(scratch_, std::span<const Digit>(rows_.data() + k * length_, length_), factor, b_,
                 pivots_[k]);
    }
    const auto lead = std::find_if(scratch_.begin(), scratch_.end(), [](Digit d) { return d != 0; });
    if (lead == scratch_.end()) return false;

    const auto pivot = static_cast<std::size_t>(lead - scratch_.begin());
    const Digit inv = inverse_mod(*lead, b_);
    for (std::size_t r = pivot; r < length_; ++r) scratch_[r] = mul_mod(scratch_[r], inv, b_);
    rows_.insert(rows_.end(), scratch_.begin(), scratch_.end());
    pivots_.push_back(pivot);
    return true;
}

} // namespace rdn
