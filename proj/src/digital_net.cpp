#include "rdn/digital_net.hpp"

#include "rdn/errors.hpp"

#include <fmt/format.h>
#include <limits>
#include <random>
#include <utility>

namespace rdn {

std::uint64_t checked_pow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < e; ++i) {
        if (out > std::numeric_limits<std::uint64_t>::max() / b) {
            throw BudgetError(fmt::format("{}^{} overflows 64 bits", b, e));
        }
        out *= b;
    }
    return out;
}

DigitVector digits_of(std::uint64_t k, Digit b, std::size_t m) {
    require_prime_modulus(b);
    if (k >= checked_pow(b, m)) throw ValidationError(fmt::format("index {} >= {}^{}", k, b, m));
    DigitVector digits(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        digits[i] = static_cast<Digit>(k % b);
        k /= b;
    }
    return digits;
}

GeneratingSet::GeneratingSet(Digit b, std::size_t m, std::vector<GfMatrix> matrices, bool from_sequence)
    : b_(b), m_(m), matrices_(std::move(matrices)), from_sequence_(from_sequence) {
    require_prime_modulus(b);
    if (m == 0) throw ValidationError("m must be at least 1");
    if (matrices_.empty()) throw ValidationError("s must be at least 1");
    for (std::size_t j = 0; j < matrices_.size(); ++j) {
        const auto& c = matrices_[j];
        if (c.modulus() != b || c.rows() != m || c.cols() != m) {
            throw ValidationError(fmt::format("generating matrix {} is not {}x{} over F_{}", j + 1, m, m, b));
        }
    }
}

GeneratingSet GeneratingSet::project(std::span<const std::size_t> u) const {
    std::vector<GfMatrix> picked;
    picked.reserve(u.size());
    for (const std::size_t j : u) {
        if (j >= s()) throw ValidationError(fmt::format("coordinate {} outside [1, {}]", j + 1, s()));
        picked.push_back(matrices_[j]);
    }
    return GeneratingSet(b_, m_, std::move(picked), from_sequence_);
}

DigitalNet::DigitalNet(Digit b, std::size_t m, std::size_t s, std::vector<std::uint64_t> numerators)
    : b_(b), m_(m), s_(s), n_(checked_pow(b, m)), numerators_(std::move(numerators)) {
    require_prime_modulus(b);
    if (numerators_.size() != n_ * s_) {
        throw ValidationError(fmt::format("net table has {} entries, expected {}", numerators_.size(), n_ * s_));
    }
    for (const auto x : numerators_) {
        if (x >= n_) throw ValidationError(fmt::format("numerator {} >= {}", x, n_));
    }
}

CoordinateGenerator::CoordinateGenerator(const GfMatrix& c, std::size_t active_rows, std::size_t active_cols)
    : b_(c.modulus()), rows_(active_rows), cols_(active_cols), weights_(active_rows) {
    if (active_rows > c.rows() || active_cols > c.cols()) {
        throw ValidationError("active block larger than generating matrix");
    }
    block_.reserve(rows_ * cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t r = 0; r < cols_; ++r) block_.push_back(c(i, r));
    }
    std::uint64_t w = 1;
    for (std::size_t i = c.rows(); i-- > 0;) {
        if (i < rows_) weights_[i] = w;
        if (i > 0) w *= b_;
    }
}

DigitalNet generate_net(const GeneratingSet& g) {
    const Digit b = g.modulus();
    const std::size_t m = g.m();
    const std::size_t s = g.s();
    const std::uint64_t n = checked_pow(b, m);
    if (n > max_net_entries / s) {
        throw BudgetError(fmt::format("net with {} points in {} dimensions is too large", n, s));
    }

    std::vector<CoordinateGenerator> generators;
    generators.reserve(s);
    for (const auto& c : g.matrices()) generators.emplace_back(c, m, m);

    std::vector<std::uint64_t> numerators(n * s);
    DigitCounter k(b, m);
    for (std::uint64_t idx = 0; idx < n; ++idx, k.advance()) {
        for (std::size_t j = 0; j < s; ++j) numerators[idx * s + j] = generators[j](k.digits());
    }
    return DigitalNet(b, m, s, std::move(numerators));
}

GeneratingSet random_generating_set(Digit b, std::size_t m, std::size_t s, std::uint64_t seed) {
    require_prime_modulus(b);
    std::mt19937_64 engine(seed);
    // Accept only draws from a range whose length is a multiple of b.
    const std::uint64_t threshold = (std::uint64_t{0} - b) % b;
    auto draw = [&]() -> Digit {
        for (;;) {
            const std::uint64_t x = engine();
            if (x >= threshold) return static_cast<Digit>(x % b);
        }
    };

    std::vector<GfMatrix> matrices;
    matrices.reserve(s);
    for (std::size_t j = 0; j < s; ++j) {
        std::vector<Digit> entries(m * m);
        for (auto& e : entries) e = draw();
        matrices.emplace_back(b, m, m, std::move(entries));
    }
    return GeneratingSet(b, m, std::move(matrices), false);
}

GeneratingSet identity_generating_set(Digit b, std::size_t m, std::size_t s) {
    // Repeated identical coordinates only form a (t,s)-sequence when s = 1.
    return GeneratingSet(b, m, std::vector<GfMatrix>(s, GfMatrix::identity(b, m)), s == 1);
}

GeneratingSet pascal_generating_set(Digit b, std::size_t m, std::size_t s) {
    require_prime_modulus(b);
    if (s > b) throw ValidationError(fmt::format("Pascal construction needs s <= b, got s={} b={}", s, b));

    // Binomials mod b via Pascal's rule.
    GfMatrix pascal(b, m, m);
    for (std::size_t r = 0; r < m; ++r) {
        pascal.set(0, r, 1);
        for (std::size_t i = 1; i <= r; ++i) {
            const Digit above = i < r ? pascal(i, r - 1) : 0;
            pascal.set(i, r, static_cast<Digit>((pascal(i - 1, r - 1) + above) % b));
        }
    }

    std::vector<GfMatrix> matrices;
    matrices.reserve(s);
    GfMatrix power = GfMatrix::identity(b, m);
    for (std::size_t j = 0; j < s; ++j) {
        matrices.push_back(power);
        power = mat_mul(power, pascal);
    }
    return GeneratingSet(b, m, std::move(matrices), true);
}

} // namespace rdn
