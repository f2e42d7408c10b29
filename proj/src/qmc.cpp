#include "rdn/qmc.hpp"

#include "rdn/errors.hpp"

#include <cmath>
#include <fmt/format.h>
#include <future>

namespace rdn {

IntegrandKind parse_integrand_kind(std::string_view name) {
    if (name == "linear") return IntegrandKind::linear;
    if (name == "exponential") return IntegrandKind::exponential;
    throw ValidationError(fmt::format("unknown integrand '{}'", name));
}

double Integrand::operator()(std::span<const double> y) const {
    if (y.size() != c.size()) throw ValidationError("integrand: argument length differs from coefficient count");
    double dot = 0;
    for (std::size_t l = 0; l < c.size(); ++l) dot += c[l] * y[l];
    return kind == IntegrandKind::linear ? offset + dot : std::exp(dot);
}

double reference_integral(const Integrand& f, const DenseMatrix& a) {
    if (f.c.size() != a.cols()) throw ValidationError("integrand has the wrong number of coefficients for A");
    // beta = A c: the integrand depends on x only through x . beta.
    std::vector<double> beta(a.rows(), 0.0);
    for (std::size_t j = 0; j < a.rows(); ++j) {
        for (std::size_t l = 0; l < a.cols(); ++l) beta[j] += a(j, l) * f.c[l];
    }
    if (f.kind == IntegrandKind::linear) {
        double sum = f.offset;
        for (const double bj : beta) sum += bj / 2;
        return sum;
    }
    double product = 1;
    for (const double bj : beta) product *= bj == 0 ? 1.0 : std::expm1(bj) / bj;
    return product;
}

double qmc_from_product(const DenseMatrix& xa, const Integrand& f) {
    double sum = 0;
    for (std::size_t k = 0; k < xa.rows(); ++k) sum += f(std::span<const double>(xa.row(k), xa.cols()));
    return sum / static_cast<double>(xa.rows());
}

double qmc_quadrature(const DigitalNet& net, const DenseMatrix& a, const Integrand& f) {
    if (a.rows() != net.s()) throw ValidationError("A must have s rows");
    return qmc_from_product(standard_product(point_matrix(net), a).value, f);
}

namespace {

ProductAlgorithm algorithm_for(ReductionKind kind) {
    switch (kind) {
    case ReductionKind::row: return ProductAlgorithm::row;
    case ReductionKind::column: return ProductAlgorithm::column;
    case ReductionKind::column_row: return ProductAlgorithm::column_row;
    case ReductionKind::mixed: break;
    }
    throw ValidationError("error reports support row, column and column_row reductions");
}

ErrorRow error_row(const ErrorReportConfig& config, std::size_t m, double reference) {
    const auto g = config.source(m);
    const auto w = config.indices(m);
    ErrorRow row;
    row.m = m;
    row.n = checked_pow(g.modulus(), m);

    const auto full = standard_net_product(g, config.a);
    row.err_unreduced = std::abs(qmc_from_product(full.value, config.f) - reference);
    const auto reduced = run_product(algorithm_for(config.kind), g, w, config.a, config.force);
    row.err_reduced = std::abs(qmc_from_product(reduced.value, config.f) - reference);

    const bool projections = g.s() <= config.quality.projection_limit;
    const auto report = quality_report(g, projections, config.quality);
    const BoundInputs inputs{g.modulus(), m, w, config.weights, ProjectionTMap::from_report(report)};
    row.disc_bound = weighted_disc_bound(inputs, config.kind, config.disc).bound;
    return row;
}

} // namespace

std::vector<ErrorRow> error_report(const ErrorReportConfig& config) {
    if (!config.source || !config.indices) throw ValidationError("error report needs a net source and indices");
    if (config.m_min == 0 || config.m_min > config.m_max) throw ValidationError("empty m range");
    algorithm_for(config.kind);
    require_finite(config.a, "A");
    const double reference = reference_integral(config.f, config.a);

    std::vector<ErrorRow> rows;
    if (config.jobs <= 1) {
        for (std::size_t m = config.m_min; m <= config.m_max; ++m) rows.push_back(error_row(config, m, reference));
        return rows;
    }
    // Batches of `jobs` concurrent m values; rows come back in m order.
    for (std::size_t start = config.m_min; start <= config.m_max; start += config.jobs) {
        std::vector<std::future<ErrorRow>> batch;
        for (std::size_t m = start; m <= config.m_max && m < start + config.jobs; ++m) {
            batch.push_back(std::async(std::launch::async, [&config, m, reference] {
                return error_row(config, m, reference);
            }));
        }
        for (auto& f : batch) rows.push_back(f.get());
    }
    return rows;
}

} // namespace rdn
