#pragma once

#include "rdn/discrepancy.hpp"
#include "rdn/fast_product.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace rdn {

enum class IntegrandKind { linear, exponential };

IntegrandKind parse_integrand_kind(std::string_view name);

/// f(y) = offset + sum_l c_l y_l (linear) or exp(sum_l c_l y_l) (exponential),
/// evaluated at y = x^T A.
struct Integrand {
    IntegrandKind kind = IntegrandKind::linear;
    std::vector<double> c;
    double offset = 0; ///< linear kind only

    [[nodiscard]] double operator()(std::span<const double> y) const;
};

/// Exact integral of f(x^T A) over [0,1]^s.
double reference_integral(const Integrand& f, const DenseMatrix& a);

/// (1/N) sum_k f(row k of the precomputed product XA).
double qmc_from_product(const DenseMatrix& xa, const Integrand& f);

/// Q_N(f) = (1/N) sum_k f(x_k^T A) using the standard product.
double qmc_quadrature(const DigitalNet& net, const DenseMatrix& a, const Integrand& f);

struct ErrorRow {
    std::size_t m = 0;
    std::uint64_t n = 0;
    double err_unreduced = 0;
    double err_reduced = 0;
    double disc_bound = 0;
};

struct ErrorReportConfig {
    /// Generating set for each m (e.g. Pascal sections, or random matrices per m).
    std::function<GeneratingSet(std::size_t m)> source;
    /// Reduction indices for each m (schedules clamp at m).
    std::function<ReductionIndices(std::size_t m)> indices;
    ReductionKind kind = ReductionKind::row;
    DenseMatrix a;
    Integrand f;
    std::size_t m_min = 1;
    std::size_t m_max = 1;
    ProductWeights weights{std::vector<double>{}};
    /// Allow column-type reductions of matrices not derived from a sequence.
    bool force = false;
    /// Worker threads over m values; 1 runs sequentially.
    std::size_t jobs = 1;
    QualityOptions quality;
    DiscBoundOptions disc;
};

/**
 * For each m in [m_min, m_max]: the error of the unreduced net (standard
 * product), the error of the reduced net (through the matching structured
 * product), and the weighted discrepancy bound of the reduced net computed
 * from the unreduced net's exact projection t-values.
 */
std::vector<ErrorRow> error_report(const ErrorReportConfig& config);

} // namespace rdn
