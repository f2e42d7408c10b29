#include "rdn/discrepancy.hpp"

#include "rdn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <string>

namespace rdn {

namespace {

Rational rational_pow(const Rational& base, std::size_t e) {
    Rational out = 1;
    for (std::size_t i = 0; i < e; ++i) out *= base;
    return out;
}

Rational binomial(std::ptrdiff_t n, std::ptrdiff_t k) {
    if (k < 0 || k > n) return 0;
    Rational out = 1;
    for (std::ptrdiff_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

Rational factorial(std::size_t n) {
    Rational out = 1;
    for (std::size_t i = 2; i <= n; ++i) out *= i;
    return out;
}

double parse_double(std::string_view text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(std::string(text), &used);
        if (used != text.size()) throw ValidationError(fmt::format("bad number '{}'", text));
        return v;
    } catch (const std::logic_error&) {
        throw ValidationError(fmt::format("bad number '{}'", text));
    }
}

// log(gamma_j (1 + b^{w_j})) without overflowing for huge w_j.
double log_term1_factor(double gamma, Digit b, std::uint64_t w) {
    const double wl = static_cast<double>(w) * std::log(static_cast<double>(b));
    return std::log(gamma) + wl + std::log1p(std::exp(-wl));
}

} // namespace

ProductWeights::ProductWeights(std::vector<double> gamma) : gamma_(std::move(gamma)) {
    for (std::size_t j = 0; j < gamma_.size(); ++j) {
        if (!(gamma_[j] > 0) || !std::isfinite(gamma_[j])) {
            throw ValidationError(fmt::format("weight gamma_{} = {} is not a positive real", j + 1, gamma_[j]));
        }
        if (j > 0 && gamma_[j] > gamma_[j - 1]) throw ValidationError("weights must be non-increasing");
    }
}

double ProductWeights::weight(std::span<const std::size_t> u) const {
    double w = 1;
    for (const std::size_t j : u) w *= gamma_.at(j);
    return w;
}

ProductWeights power_weights(std::size_t s, double exponent) {
    std::vector<double> gamma(s);
    for (std::size_t j = 0; j < s; ++j) gamma[j] = std::pow(static_cast<double>(j + 1), -exponent);
    return ProductWeights(std::move(gamma));
}

ProductWeights parse_weights(std::string_view text, std::size_t s) {
    if (text.starts_with("j^-")) return power_weights(s, parse_double(text.substr(3)));
    std::vector<double> gamma;
    while (!text.empty()) {
        const auto comma = text.find(',');
        gamma.push_back(parse_double(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (gamma.size() != s) throw ValidationError(fmt::format("expected {} weights, got {}", s, gamma.size()));
    return ProductWeights(std::move(gamma));
}

std::size_t ProjectionTMap::t_for(const Subset& u, std::size_t m) const {
    if (const auto it = exact.find(u); it != exact.end()) return it->second;
    return std::min(global_t, m);
}

ProjectionTMap ProjectionTMap::from_report(const QualityReport& report) {
    ProjectionTMap map;
    map.global_t = report.t_min;
    for (const auto& p : report.per_projection) map.exact.emplace(p.u, p.t);
    return map;
}

void validate(const BoundInputs& in) {
    require_prime_modulus(in.b);
    if (in.weights.size() != in.s()) throw ValidationError("weights and reduction indices differ in length");
    if (in.t_map.global_t > in.m) throw ValidationError("the net's t exceeds m");
    for (const auto& [u, t] : in.t_map.exact) {
        if (t > in.m) throw ValidationError("a projection t_u exceeds m");
        if (u.empty() || u.back() >= in.s()) throw ValidationError("t_map subset outside [s]");
    }
}

Rational a_coeff(std::size_t v, Digit b, std::size_t n) {
    if (n < 2) throw ValidationError("a_coeff needs |u| >= 2");
    if (v >= n) throw ValidationError(fmt::format("a_coeff: v = {} outside [0, {}]", v, n - 1));
    const bool even = b % 2 == 0;
    const Rational bb = b;
    const Rational a0 = even ? Rational((bb + 8) / 4) : Rational((bb + 4) / 2);
    const Rational a1 = even ? Rational(bb * bb / (4 * (bb + 1))) : Rational((bb - 1) / 4);
    const Rational half_b2 = (bb + 2) / 2;
    const auto nn = static_cast<std::ptrdiff_t>(n);
    const auto vv = static_cast<std::ptrdiff_t>(v);

    Rational out = 0;
    if (const Rational c = binomial(nn - 2, vv); c != 0) {
        out += c * rational_pow(half_b2, n - 2 - v) * rational_pow(bb - 1, v) /
               (rational_pow(Rational(2), v) * factorial(v)) * (a0 + Rational(nn * nn) - 4);
    }
    if (const Rational c = binomial(nn - 2, vv - 1); c != 0) {
        out += c * rational_pow(half_b2, n - 1 - v) * rational_pow(bb - 1, v - 1) /
               (rational_pow(Rational(2), v - 1) * factorial(v)) * a1;
    }
    return out;
}

Rational a_coeff_sum(Digit b, std::size_t n, std::size_t m) {
    Rational sum = 0;
    Rational mv = 1;
    for (std::size_t v = 0; v < n; ++v) {
        sum += a_coeff(v, b, n) * mv;
        mv *= m;
    }
    return sum;
}

Term1 term1_bound(const BoundInputs& in) {
    validate(in);
    const std::size_t s = in.s();
    const std::size_t active = s_star(in.w, in.m);
    Term1 out;
    if (active == s) return out;
    out.vacuous = false;

    double log_sum = 0;
    bool beyond = false;
    for (std::size_t j = 0; j < s; ++j) {
        const double lf = log_term1_factor(in.weights[j], in.b, in.w[j]);
        if (lf > 0) {
            log_sum += lf;
            out.argmax.push_back(j);
            beyond = beyond || j >= active;
        }
    }
    if (!beyond) {
        std::size_t best = active;
        double best_lf = log_term1_factor(in.weights[active], in.b, in.w[active]);
        for (std::size_t j = active + 1; j < s; ++j) {
            const double lf = log_term1_factor(in.weights[j], in.b, in.w[j]);
            if (lf > best_lf) best = j, best_lf = lf;
        }
        log_sum += best_lf;
        out.argmax.push_back(best);
        std::sort(out.argmax.begin(), out.argmax.end());
    }
    out.value = std::exp(log_sum - static_cast<double>(in.m) * std::log(static_cast<double>(in.b)));
    return out;
}

DiscrepancyBound weighted_disc_bound(const BoundInputs& in, ReductionKind kind, const DiscBoundOptions& opts) {
    validate(in);
    if (kind == ReductionKind::mixed) throw ValidationError("the discrepancy bound is defined for row, column, column_row");
    const std::size_t m = in.m;
    const std::size_t active = s_star(in.w, m);

    // b^(T_u - m) with T_u from the reduced projection's quality bound.
    auto scaled_power = [&](const Subset& u) {
        const std::size_t wu = in.w.clamped(u.back(), m);
        const std::size_t tu = in.t_map.t_for(u, m);
        const std::size_t tu_reduced = kind == ReductionKind::row ? std::max(wu, tu) : std::min(m, wu + tu);
        return Rational(1) / rational_pow(Rational(in.b), m - std::min(m, tu_reduced));
    };

    DiscrepancyBound out;
    out.term1 = term1_bound(in);
    out.bound = out.term1.vacuous ? 0 : out.term1.value;
    if (!out.term1.vacuous) out.argmax_subset = out.term1.argmax;
    auto consider = [&](double value, const Subset& u) {
        if (value > out.bound) {
            out.bound = value;
            out.argmax_subset = u;
        }
    };

    for (std::size_t j = 0; j < active; ++j) {
        const Subset u{j};
        const double value = in.weights[j] * static_cast<double>(scaled_power(u));
        out.term2 = std::max(out.term2.value_or(0), value);
        consider(value, u);
    }

    std::vector<Subset> family;
    if (opts.subsets) {
        out.term3_exhaustive = false;
        for (const auto& u : *opts.subsets) {
            if (u.empty() || !std::is_sorted(u.begin(), u.end()) ||
                std::adjacent_find(u.begin(), u.end()) != u.end()) {
                throw ValidationError("explicit subsets must be strictly increasing and non-empty");
            }
            if (u.size() >= 2 && u.back() < active) family.push_back(u);
        }
    } else if (active >= 2) {
        if (active > opts.enumeration_limit) {
            throw BudgetError(fmt::format("s* = {} exceeds the subset enumeration limit {}; supply explicit subsets",
                                          active, opts.enumeration_limit));
        }
        for (auto& u : nonempty_subsets(active)) {
            if (u.size() >= 2) family.push_back(std::move(u));
        }
    }

    std::map<std::size_t, Rational> sums;
    for (const auto& u : family) {
        auto [it, fresh] = sums.try_emplace(u.size());
        if (fresh) it->second = a_coeff_sum(in.b, u.size(), m);
        const double value = in.weights.weight(u) * static_cast<double>(scaled_power(u) * it->second);
        out.term3 = std::max(out.term3.value_or(0), value);
        consider(value, u);
    }
    return out;
}

double local_discrepancy(const DigitalNet& net, std::span<const std::size_t> u, std::span<const double> x) {
    if (u.size() != x.size() || u.empty()) throw ValidationError("local_discrepancy: need one corner per coordinate");
    double volume = 1;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] >= net.s()) throw ValidationError("local_discrepancy: coordinate outside [s]");
        volume *= x[i];
    }
    std::uint64_t count = 0;
    for (std::uint64_t k = 0; k < net.size(); ++k) {
        bool inside = true;
        for (std::size_t i = 0; i < u.size() && inside; ++i) inside = net.value(k, u[i]) < x[i];
        count += inside ? 1 : 0;
    }
    return static_cast<double>(count) / static_cast<double>(net.size()) - volume;
}

double exact_star_discrepancy(const DigitalNet& net, std::span<const std::size_t> u) {
    const std::size_t dim = u.size();
    if (dim == 0 || dim > 3) throw BudgetError("exact star discrepancy supports 1 <= |u| <= 3");
    const std::uint64_t n = net.size();
    if (n > max_exact_disc_points) {
        throw BudgetError(fmt::format("exact star discrepancy limited to {} points", max_exact_disc_points));
    }
    for (const auto j : u) {
        if (j >= net.s()) throw ValidationError("exact_star_discrepancy: coordinate outside [s]");
    }

    // Exact arithmetic on numerators: a corner g = (g_1..g_d) has volume prod g_i / n^d.
    const auto nn = static_cast<std::int64_t>(n);
    std::vector<std::vector<std::int64_t>> grid(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::uint64_t k = 0; k < n; ++k) grid[i].push_back(static_cast<std::int64_t>(net.numerator(k, u[i])));
        grid[i].push_back(nn);
        std::sort(grid[i].begin(), grid[i].end());
        grid[i].erase(std::unique(grid[i].begin(), grid[i].end()), grid[i].end());
    }

    // Points ordered by their last coordinate so filtered subsets stay sorted.
    std::vector<std::uint64_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        return net.numerator(a, u[dim - 1]) < net.numerator(b, u[dim - 1]);
    });

    std::int64_t scale = 1; // n^(dim - 1)
    for (std::size_t i = 1; i < dim; ++i) scale *= nn;
    std::int64_t best = 0; // numerator over n^dim

    std::vector<std::int64_t> corner(dim, 0);
    std::vector<std::int64_t> open_last;
    std::vector<std::int64_t> closed_last;
    auto sweep_last = [&]() {
        std::int64_t prefix_volume = 1;
        for (std::size_t i = 0; i + 1 < dim; ++i) prefix_volume *= corner[i];
        open_last.clear();
        closed_last.clear();
        for (const auto k : order) {
            bool open = true;
            bool closed = true;
            for (std::size_t i = 0; i + 1 < dim; ++i) {
                const auto y = static_cast<std::int64_t>(net.numerator(k, u[i]));
                open = open && y < corner[i];
                closed = closed && y <= corner[i];
            }
            const auto y_last = static_cast<std::int64_t>(net.numerator(k, u[dim - 1]));
            if (open) open_last.push_back(y_last);
            if (closed) closed_last.push_back(y_last);
        }
        std::size_t open_count = 0;
        std::size_t closed_count = 0;
        for (const auto g : grid[dim - 1]) {
            while (open_count < open_last.size() && open_last[open_count] < g) ++open_count;
            while (closed_count < closed_last.size() && closed_last[closed_count] <= g) ++closed_count;
            const std::int64_t volume = prefix_volume * g;
            best = std::max(best, volume - static_cast<std::int64_t>(open_count) * scale);
            best = std::max(best, static_cast<std::int64_t>(closed_count) * scale - volume);
        }
    };

    auto descend = [&](auto&& self, std::size_t i) -> void {
        if (i + 1 == dim) {
            sweep_last();
            return;
        }
        for (const auto g : grid[i]) {
            corner[i] = g;
            self(self, i + 1);
        }
    };
    descend(descend, 0);

    return static_cast<double>(best) / (static_cast<double>(scale) * static_cast<double>(nn));
}

double exact_weighted_star_discrepancy(const DigitalNet& net, const ProductWeights& weights) {
    if (net.s() > 3) throw BudgetError("exact weighted star discrepancy supports s <= 3");
    if (weights.size() != net.s()) throw ValidationError("one weight per coordinate required");
    double best = 0;
    for (const auto& u : nonempty_subsets(net.s())) {
        best = std::max(best, weights.weight(u) * exact_star_discrepancy(net, u));
    }
    return best;
}

} // namespace rdn
