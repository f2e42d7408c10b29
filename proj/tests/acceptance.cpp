// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Every check recomputes the quantities it asserts rather than trusting the
// library's own pass flags.

#include "oracles.hpp"
#include "rdn/bench.hpp"
#include "rdn/discrepancy.hpp"
#include "rdn/fast_product.hpp"
#include "rdn/qmc.hpp"
#include "rdn/quality.hpp"
#include "rdn/reduction.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>

using namespace rdn;

namespace {

const ReduceOptions quiet{false, nullptr};
const ReduceOptions quiet_force{true, nullptr};

std::size_t floor0(std::size_t a, std::size_t b) { return a > b ? a - b : 0; }

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(std::string why) {
        if (pass) detail = std::move(why);
        pass = false;
    }
};

DenseMatrix random_dense(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    DenseMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) a(i, j) = unit(rng);
    }
    return a;
}

Matrix<Rational> to_rational(const DenseMatrix& a) {
    // Round to multiples of 2^-10 so exact products stay small.
    Matrix<Rational> r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = Rational(static_cast<long>(std::lround(a(i, j) * 1024)), 1024);
    }
    return r;
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Pascal-derived sets: s is bounded by the base for the Faure construction.
GeneratingSet pascal_instance(std::mt19937_64& rng, Digit b, std::size_t max_m) {
    std::uniform_int_distribution<std::size_t> m_dist(1, max_m);
    std::uniform_int_distribution<std::size_t> s_dist(1, b);
    return pascal_generating_set(b, m_dist(rng), s_dist(rng));
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    Outcome out;
    for (std::size_t m = 2; m <= 8; ++m) {
        for (std::size_t s = 1; s <= 3; ++s) {
            for (std::uint64_t seed = 0; seed < 50; ++seed) {
                const auto g = random_generating_set(2, m, s, seed * 1000 + m * 10 + s);
                const auto fast = min_t(g);
                const auto slow = oracle_min_t(generate_net(g));
                if (fast != slow) out.fail(fmt::format("m={} s={} seed={}: {} vs {}", m, s, seed, fast, slow));
            }
        }
    }
    return out;
}

Outcome criterion2() {
    Outcome out;
    std::mt19937_64 rng(2);
    std::size_t degenerate_full = 0;
    std::size_t degenerate_small = 0;
    for (int i = 0; i < 200; ++i) {
        const std::size_t m = 1 + rng() % 8;
        const std::size_t s = 1 + rng() % 4;
        const auto g = random_generating_set(2, m, s, rng());
        const auto w = oracle::random_monotone(rng, s, m + 1, true);
        const std::size_t ws = static_cast<std::size_t>(w[s - 1]);
        const std::size_t rho = rho_m(g);
        const std::size_t t = m - rho;
        const auto reduced = row_reduce(g, w, quiet);
        const std::size_t rho_r = rho_m(reduced);
        const std::size_t t_r = m - rho_r;
        const bool ok = floor0(m, std::max(t, ws)) <= rho_r && rho_r <= floor0(m, ws) &&
                        t_r <= std::min(m, std::max(t, ws));
        if (!ok) out.fail(fmt::format("instance {}: m={} t={} w_s={} rho~={}", i, m, t, ws, rho_r));
        if (ws >= m) {
            ++degenerate_full;
            if (rho_r != 0) out.fail(fmt::format("instance {}: w_s >= m but rho~={}", i, rho_r));
        }
        if (ws <= t) {
            ++degenerate_small;
            if (rho_r != rho) out.fail(fmt::format("instance {}: w_s <= t but rho~={} != {}", i, rho_r, rho));
        }
        if (!check_row_reduced_bounds(g, w).pass) out.fail(fmt::format("instance {}: library check disagrees", i));
    }
    if (degenerate_full == 0 || degenerate_small == 0) out.fail("a degenerate branch was never exercised");
    out.detail += fmt::format("{}(w_s>=m: {}, w_s<=t: {})", out.pass ? "" : " ", degenerate_full, degenerate_small);
    return out;
}

Outcome criterion3() {
    Outcome out;
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const Digit b = i % 2 == 0 ? 2 : 3;
        const auto g = pascal_instance(rng, b, 7);
        const std::size_t m = g.m();
        const std::size_t s = g.s();
        const auto w = oracle::random_monotone(rng, s, m + 1, false);
        const std::size_t ws = static_cast<std::size_t>(w[s - 1]);
        const std::size_t t = m - rho_m(g);
        const std::size_t rho_r = rho_m(column_row_reduce(g, w, quiet));
        const std::size_t t_r = m - rho_r;
        const bool ok = floor0(m, ws + t) <= rho_r && rho_r <= floor0(m, ws) && t_r <= std::min(m, ws + t);
        const bool exact = t != 0 || rho_r == floor0(m, ws);
        const bool strict = rho_r <= floor0(m, std::max(t, ws));
        if (t != 0) out.fail(fmt::format("instance {}: Pascal set has t={}", i, t));
        if (!ok || !exact || !strict) out.fail(fmt::format("instance {}: b={} m={} w_s={} rho~={}", i, b, m, ws, rho_r));
        const auto lib = check_column_row_bounds(g, w);
        if (!lib.pass || !lib.strict_checked) out.fail(fmt::format("instance {}: library check disagrees", i));
    }
    return out;
}

bool projection_ok(const GeneratingSet& g, const ReductionIndices& w, ReductionKind kind, Outcome& out,
                   const std::string& label) {
    const std::size_t m = g.m();
    const auto reduced = reduce(g, kind, w, quiet_force);
    bool ok = true;
    for (const auto& u : nonempty_subsets(g.s())) {
        const std::size_t t_u = projection_t(g, u);
        const std::size_t t_r = projection_t(reduced, u);
        const std::size_t rho_r = m - t_r;
        const std::size_t wu = static_cast<std::size_t>(w[u.back()]);
        const std::size_t hi = kind == ReductionKind::row ? std::max(wu, t_u) : wu + t_u;
        if (!(floor0(m, hi) <= rho_r && rho_r <= floor0(m, wu) && t_r <= std::min(m, hi))) {
            out.fail(fmt::format("{} kind={} |u|={}: t_u={} w={} t~={}", label, to_string(kind), u.size(), t_u, wu, t_r));
            ok = false;
        }
    }
    for (const auto& p : check_projection_bounds(g, w, kind, true)) {
        if (!p.pass) {
            out.fail(label + ": library check disagrees");
            ok = false;
        }
    }
    return ok;
}

Outcome criterion4() {
    Outcome out;
    std::size_t cases = 0;
    for (std::size_t m = 1; m <= 5; ++m) {
        const auto g = pascal_generating_set(3, m, 3);
        std::mt19937_64 rng(40 + m);
        for (int rep = 0; rep < 4; ++rep) {
            const auto w = oracle::random_monotone(rng, 3, m + 1, false);
            for (const auto kind : {ReductionKind::row, ReductionKind::column, ReductionKind::column_row}) {
                projection_ok(g, w, kind, out, fmt::format("pascal m={}", m));
                ++cases;
            }
        }
    }
    std::mt19937_64 rng(4);
    for (std::size_t m = 1; m <= 6; ++m) {
        for (int rep = 0; rep < 10; ++rep) {
            const auto g = random_generating_set(2, m, 2, rng());
            projection_ok(g, oracle::random_monotone(rng, 2, m + 1, false), ReductionKind::row, out,
                          fmt::format("random m={}", m));
            ++cases;
        }
    }
    out.detail += fmt::format("{}({} reduced sets, every projection)", out.pass ? "" : " ", cases);
    return out;
}

Outcome criterion5() {
    Outcome out;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const Digit b = i % 2 == 0 ? 2 : 3;
        const auto g = pascal_instance(rng, b, 7);
        const std::size_t m = g.m();
        const std::size_t s = g.s();
        const auto wr = oracle::random_monotone(rng, s, m + 1, false);
        const auto wc = oracle::random_monotone(rng, s, m + 1, false);
        const std::size_t t = m - rho_m(g);
        const std::size_t r = static_cast<std::size_t>(wr[s - 1]);
        const std::size_t c = static_cast<std::size_t>(wc[s - 1]);
        const std::size_t rho_r = rho_m(mixed_reduce(g, wr, wc, quiet));
        const std::size_t t_r = m - rho_r;
        const bool ok = floor0(m, std::max(c + t, r)) <= rho_r && rho_r <= floor0(m, std::max(c, r)) &&
                        t_r <= std::min(m, std::max(c + t, r));
        if (!ok) out.fail(fmt::format("instance {}: m={} w^r_s={} w^c_s={} rho~={}", i, m, r, c, rho_r));
        if (!check_mixed_bounds(g, wr, wc).pass) out.fail(fmt::format("instance {}: library check disagrees", i));
    }
    return out;
}

// Criteria 6, 7 and 10 share the same 100 instances.
struct ProductInstance {
    GeneratingSet g;
    ReductionIndices w;
    DenseMatrix a;
    std::string schedule;
};

std::vector<ProductInstance> product_instances() {
    std::vector<ProductInstance> out;
    std::mt19937_64 rng(6);
    for (int i = 0; i < 100; ++i) {
        const std::size_t m = 1 + rng() % 8;
        const std::size_t s = 1 + rng() % 16;
        const std::size_t tau = 1 + rng() % 8;
        auto g = random_generating_set(2, m, s, rng());
        std::string label = i % 3 == 0 ? "log2" : i % 3 == 1 ? "log2sqrt" : "random";
        auto w = i % 3 == 0   ? log_schedule(2, m, s)
                 : i % 3 == 1 ? log_sqrt_schedule(2, m, s)
                              : oracle::random_monotone(rng, s, m + 1, false);
        auto a = random_dense(s, tau, rng);
        out.push_back({std::move(g), std::move(w), std::move(a), label});
    }
    return out;
}

const ProductAlgorithm fast_algorithms[] = {ProductAlgorithm::row, ProductAlgorithm::column,
                                            ProductAlgorithm::column_row};

Outcome criterion6(const std::vector<ProductInstance>& instances) {
    Outcome out;
    double worst = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& [g, w, a, label] = instances[i];
        for (const auto algo : fast_algorithms) {
            const auto reduced = reduce(g, reduction_for(algo), w, quiet_force);
            const auto x = point_matrix(generate_net(reduced));
            const auto expected = standard_product(x, a).value;
            const double err = max_relative_error(run_product(algo, g, w, a, true).value, expected, x, a);
            worst = std::max(worst, err);
            if (!(err <= 1e-12)) out.fail(fmt::format("instance {} ({}) {}: rel err {:.3g}", i, label, to_string(algo), err));

            if (i % 4 == 0) {
                const auto ar = to_rational(a);
                const auto exact = standard_product(point_matrix<Rational>(generate_net(reduced)), ar).value;
                Matrix<Rational> fast;
                switch (algo) {
                case ProductAlgorithm::row:
                    fast = row_reduced_product(g, w, ar).value;
                    break;
                case ProductAlgorithm::column:
                    fast = column_reduced_product(g, w, ar, true).value;
                    break;
                default:
                    fast = column_row_reduced_product(g, w, ar, true).value;
                }
                if (!(fast == exact)) out.fail(fmt::format("instance {} {}: exact mode differs", i, to_string(algo)));
            }
        }
    }
    out.detail += fmt::format("{}(worst rel err {:.2g}; exact mode on 25 instances)", out.pass ? "" : " ", worst);
    return out;
}

Outcome criterion7(const std::vector<ProductInstance>& instances) {
    Outcome out;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& g = instances[i].g;
        const auto& w = instances[i].w;
        const std::size_t m = g.m();
        const std::uint64_t n = ipow(2, m);

        const auto rows = generate_net(row_reduce(g, w, quiet_force));
        for (std::size_t j = 0; j < g.s(); ++j) {
            const std::uint64_t step = ipow(2, std::min<std::uint64_t>(w[j], m));
            for (std::uint64_t k = 0; k < n; ++k) {
                if (rows.numerator(k, j) % step != 0) {
                    out.fail(fmt::format("instance {}: row-reduced numerator not divisible at k={} j={}", i, k, j));
                    break;
                }
            }
        }

        const auto cols = generate_net(column_reduce(g, w, quiet_force));
        for (std::size_t j = 0; j < g.s(); ++j) {
            const std::uint64_t block = n / ipow(2, std::min<std::uint64_t>(w[j], m));
            for (std::uint64_t k = block; k < n; ++k) {
                if (cols.numerator(k, j) != cols.numerator(k % block, j)) {
                    out.fail(fmt::format("instance {}: column-reduced coordinate {} is not a stacked copy", i, j));
                    break;
                }
            }
        }
    }
    return out;
}

Outcome criterion8() {
    Outcome out;
    const std::map<std::pair<std::size_t, Digit>, Rational> base{
        {{0, 2}, Rational(5, 2)}, {{1, 2}, Rational(1, 3)}, {{0, 3}, Rational(7, 2)}, {{1, 3}, Rational(1, 2)}};
    for (const auto& [key, value] : base) {
        if (a_coeff(key.first, key.second, 2) != value) {
            out.fail(fmt::format("a_{},{} wrong", key.first, key.second));
        }
    }
    // At |u| = 2 the general formula must collapse to the base values, which
    // depend on the parity of b.
    for (const Digit b : {2u, 3u, 5u}) {
        const long bl = static_cast<long>(b);
        const Rational a0 = b % 2 == 0 ? Rational(bl + 8, 4) : Rational(bl + 4, 2);
        const Rational a1 = b % 2 == 0 ? Rational(bl * bl, 4 * (bl + 1)) : Rational(bl - 1, 4);
        if (a_coeff(0, b, 2) != a0 || a_coeff(1, b, 2) != a1) out.fail(fmt::format("b={}: |u|=2 values differ", b));
    }
    return out;
}

Outcome criterion9() {
    Outcome out;
    std::mt19937_64 rng(9);
    const ReductionKind kinds[] = {ReductionKind::row, ReductionKind::column, ReductionKind::column_row};
    double min_ratio = INFINITY;
    for (int i = 0; i < 20; ++i) {
        const std::size_t m = 1 + rng() % 6;
        const std::size_t s = 1 + rng() % 3;
        const auto kind = kinds[i % 3];
        // Column kinds rest on the sequence property, so they get Pascal matrices (at most two
        // coordinates in base 2); row reduction gets random matrices.
        const auto g = kind == ReductionKind::row ? random_generating_set(2, m, s, rng())
                                                  : pascal_generating_set(2, m, std::min<std::size_t>(s, 2));
        const auto w = oracle::random_monotone(rng, g.s(), m + 1, false);
        const auto weights = power_weights(g.s(), 2);

        const BoundInputs in{2, m, w, weights, ProjectionTMap::from_report(quality_report(g, true))};
        const double bound = weighted_disc_bound(in, kind).bound;
        const double exact = exact_weighted_star_discrepancy(generate_net(reduce(g, kind, w, quiet)), weights);
        if (exact > 0) min_ratio = std::min(min_ratio, bound / exact);
        if (!(bound >= exact)) {
            out.fail(fmt::format("net {} ({} m={} s={}): bound {:.6g} < exact {:.6g}", i, to_string(kind), m, g.s(), bound,
                                 exact));
        }
    }
    out.detail += fmt::format("{}(min bound/exact {:.3g})", out.pass ? "" : " ", min_ratio);
    return out;
}

Outcome criterion10(const std::vector<ProductInstance>& instances) {
    Outcome out;
    double lo = INFINITY;
    double hi = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& [g, w, a, label] = instances[i];
        for (const auto algo : {ProductAlgorithm::standard, ProductAlgorithm::row, ProductAlgorithm::column,
                                ProductAlgorithm::column_row}) {
            const double measured = static_cast<double>(run_product(algo, g, w, a, true).counts.scalar_mults);
            const double theory = theoretical_costs(2, g.m(), g.s(), a.cols(), w, algo).product;
            if (theory == 0 && measured == 0) continue;
            const double ratio = measured / theory;
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            if (!(ratio >= 0.25 && ratio <= 4)) {
                out.fail(fmt::format("instance {} {}: {} mults vs {} predicted", i, to_string(algo), measured, theory));
            }
        }
    }
    out.detail += fmt::format("{}(ratio range [{:.3g}, {:.3g}])", out.pass ? "" : " ", lo, hi);
    return out;
}

Outcome criterion11() {
    Outcome out;
    BenchConfig config;
    config.b = 2;
    config.m_values = {12};
    config.s_values = {50, 200, 800};
    config.tau = 20;
    config.schedule = "log2";
    config.repetitions = 5;
    const auto rows = run_bench(config);
    for (const std::size_t s : config.s_values) {
        std::map<ProductAlgorithm, double> t;
        for (const auto& r : rows) {
            if (r.s == s) t[r.algo] = static_cast<double>(r.wall_ns_median);
        }
        const double cr = t[ProductAlgorithm::column_row];
        const double col = t[ProductAlgorithm::column];
        const double row = t[ProductAlgorithm::row];
        const double std_ = t[ProductAlgorithm::standard];
        if (!(cr <= 1.1 * col && col < row && row < std_)) {
            out.fail(fmt::format("s={}: column_row {:.3g} column {:.3g} row {:.3g} standard {:.3g}", s, cr, col, row, std_));
        }
        if (s == 800) {
            out.detail += fmt::format("{}(s=800 ms: column_row {:.2f}, column {:.2f}, row {:.1f}, standard {:.1f})",
                                      out.pass ? "" : " ", cr / 1e6, col / 1e6, row / 1e6, std_ / 1e6);
        }
    }
    return out;
}

Outcome criterion12() {
    Outcome out;
    // Constant integrand on a spread of nets, reduced and unreduced.
    std::mt19937_64 rng(12);
    for (int i = 0; i < 30; ++i) {
        const Digit b = i % 3 == 0 ? 3 : 2;
        const std::size_t m = 1 + rng() % 7;
        const std::size_t s = 1 + rng() % 4;
        auto g = random_generating_set(b, m, s, rng());
        if (i % 2 == 1) g = row_reduce(g, oracle::random_monotone(rng, s, m + 1, false), quiet);
        const auto a = random_dense(s, 3, rng);
        const Integrand one{IntegrandKind::linear, std::vector<double>(3, 0.0), 1.0};
        if (qmc_quadrature(generate_net(g), a, one) != 1.0) out.fail(fmt::format("net {}: constant not exact", i));
    }

    const DenseMatrix a(2, 1, {0.7, 0.4});
    const Integrand f{IntegrandKind::exponential, {1.0}, 0};
    const double reference = reference_integral(f, a);
    std::vector<double> errors;
    for (std::size_t m = 4; m <= 10; ++m) {
        errors.push_back(std::abs(qmc_quadrature(generate_net(pascal_generating_set(2, m, 2)), a, f) - reference));
    }
    std::size_t inversions = 0;
    for (std::size_t i = 1; i < errors.size(); ++i) {
        if (errors[i] >= errors[i - 1]) ++inversions;
    }
    if (inversions > 1) out.fail(fmt::format("{} inversions in the error sequence", inversions));
    out.detail += fmt::format("{}(err m=4: {:.3g}, m=10: {:.3g}, inversions {})", out.pass ? "" : " ", errors.front(),
                              errors.back(), inversions);
    return out;
}

} // namespace

int main() {
    const auto instances = product_instances();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"t-value oracle equivalence", criterion1},
        {"row-reduction bounds", criterion2},
        {"column-row bounds and strict clause", criterion3},
        {"projection bounds", criterion4},
        {"mixed-reduction bounds", criterion5},
        {"fast products match the standard product", [&] { return criterion6(instances); }},
        {"reduced-net structure invariants", [&] { return criterion7(instances); }},
        {"a_coeff values", criterion8},
        {"discrepancy bound dominates exact value", criterion9},
        {"operation counts within [1/4, 4] of theory", [&] { return criterion10(instances); }},
        {"benchmark ordering at m=12, tau=20", criterion11},
        {"QMC sanity", criterion12},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!outcome.pass) ++failures;
        fmt::print("{} {:>2} {} [{:.1f}s] {}\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                   outcome.detail);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
