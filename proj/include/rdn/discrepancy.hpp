#pragma once

#include "rdn/digital_net.hpp"
#include "rdn/quality.hpp"
#include "rdn/reduction.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace rdn {

using Rational = boost::multiprecision::cpp_rational;

/// Positive, non-increasing product weights gamma_1 >= gamma_2 >= ...; gamma_u = prod_{j in u} gamma_j.
class ProductWeights {
public:
    explicit ProductWeights(std::vector<double> gamma);

    [[nodiscard]] std::size_t size() const noexcept { return gamma_.size(); }
    [[nodiscard]] double operator[](std::size_t j) const noexcept { return gamma_[j]; }
    [[nodiscard]] double weight(std::span<const std::size_t> u) const;
    [[nodiscard]] const std::vector<double>& values() const noexcept { return gamma_; }

private:
    std::vector<double> gamma_;
};

/// gamma_j = j^(-exponent), j = 1..s.
ProductWeights power_weights(std::size_t s, double exponent);

/// Accepts "j^-<exponent>" (e.g. "j^-2") or an explicit comma-separated list.
ProductWeights parse_weights(std::string_view text, std::size_t s);

/**
 * Quality parameters t_u of the projections of the unreduced net. Subsets
 * without an exact entry fall back to min(global_t, m), which is valid since
 * every projection of a (t,m,s)-net is a (t,m,|u|)-net.
 */
struct ProjectionTMap {
    std::size_t global_t = 0;
    std::map<Subset, std::size_t> exact;

    [[nodiscard]] std::size_t t_for(const Subset& u, std::size_t m) const;

    static ProjectionTMap from_report(const QualityReport& report);
};

struct BoundInputs {
    Digit b = 2;
    std::size_t m = 1;
    ReductionIndices w;
    ProductWeights weights;
    ProjectionTMap t_map;

    [[nodiscard]] std::size_t s() const noexcept { return w.size(); }
};

/// Throws ValidationError unless the inputs are consistent (matching s, m >= t, t_u <= m).
void validate(const BoundInputs& in);

/**
 * a_{v,b}^{(n)} for 0 <= v <= n-1, n >= 2, as an exact rational, from the
 * base values a_{0,b}^{(2)} = (b+8)/4 or (b+4)/2 and a_{1,b}^{(2)} = b^2/(4(b+1))
 * or (b-1)/4 for even or odd b.
 */
Rational a_coeff(std::size_t v, Digit b, std::size_t n);

/// sum_{v=0}^{n-1} a_{v,b}^{(n)} m^v.
Rational a_coeff_sum(Digit b, std::size_t n, std::size_t m);

struct Term1 {
    bool vacuous = true; ///< s* = s: no subset leaves [s*]
    double value = 0;
    Subset argmax;
};

/**
 * max over non-empty u not contained in [s*] of b^-m prod_{j in u} gamma_j (1 + b^{w_j}).
 * With f_j = gamma_j (1 + b^{w_j}) the optimum takes every f_j > 1, plus the
 * largest f_j with j > s* if none of those lies beyond s*.
 */
Term1 term1_bound(const BoundInputs& in);

struct DiscBoundOptions {
    /// Largest s* for which all subsets of [s*] are enumerated in the third term.
    std::size_t enumeration_limit = 15;
    /// Explicit family of subsets for the third term; required when s* exceeds the limit.
    std::optional<std::vector<Subset>> subsets;
};

struct DiscrepancyBound {
    Term1 term1;
    std::optional<double> term2; ///< absent when s* = 0
    std::optional<double> term3; ///< absent when no |u| >= 2 subset of [s*] is examined
    double bound = 0;
    Subset argmax_subset; ///< subset attaining the bound
    bool term3_exhaustive = true;
};

/**
 * Upper bound on the weighted star discrepancy of the reduced net:
 * max{term1, max_{j<=s*} gamma_j b^{T_j - m},
 *     max_{u in [s*], |u|>=2} gamma_u b^{T_u - m} sum_v a_{v,b}^{(|u|)} m^v}
 * where T_u = min{m, max{w_max(u), t_u}} for row reduction and
 * T_u = min{m, w_max(u) + t_u} for column and column-row reduction.
 */
DiscrepancyBound weighted_disc_bound(const BoundInputs& in, ReductionKind kind, const DiscBoundOptions& opts = {});

/// count{k : x_{k,j} < x_j for all j in u} / N - prod_{j in u} x_j.
double local_discrepancy(const DigitalNet& net, std::span<const std::size_t> u, std::span<const double> x);

/// Largest N for which the exact star discrepancy is computed.
inline constexpr std::uint64_t max_exact_disc_points = 256;

/**
 * sup over x in (0,1]^|u| of |local discrepancy| for |u| <= 3, exact. Corners of
 * the grid of point coordinates (plus 1) are scanned for the open-box deficit
 * and the closed-box excess; limit values count as attained.
 */
double exact_star_discrepancy(const DigitalNet& net, std::span<const std::size_t> u);

/// max over non-empty u of gamma_u times the exact star discrepancy of the projection; s <= 3.
double exact_weighted_star_discrepancy(const DigitalNet& net, const ProductWeights& weights);

} // namespace rdn
