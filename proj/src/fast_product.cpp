#include "rdn/fast_product.hpp"

#include <fmt/format.h>
#include <limits>

namespace rdn {

void require_finite(const DenseMatrix& a, std::string_view what) {
    for (const double v : a.data()) {
        if (!std::isfinite(v)) throw ValidationError(fmt::format("{} contains a non-finite entry", what));
    }
}

std::string_view to_string(ProductAlgorithm algo) {
    switch (algo) {
    case ProductAlgorithm::standard: return "standard";
    case ProductAlgorithm::row: return "row";
    case ProductAlgorithm::column: return "column";
    case ProductAlgorithm::column_row: return "column_row";
    }
    return "?";
}

ProductAlgorithm parse_product_algorithm(std::string_view name) {
    if (name == "standard") return ProductAlgorithm::standard;
    if (name == "row") return ProductAlgorithm::row;
    if (name == "column") return ProductAlgorithm::column;
    if (name == "column_row") return ProductAlgorithm::column_row;
    throw ValidationError(fmt::format("unknown product algorithm '{}'", name));
}

ReductionKind reduction_for(ProductAlgorithm algo) {
    switch (algo) {
    case ProductAlgorithm::row: return ReductionKind::row;
    case ProductAlgorithm::column: return ReductionKind::column;
    case ProductAlgorithm::column_row: return ReductionKind::column_row;
    case ProductAlgorithm::standard: break;
    }
    throw ValidationError("the standard product has no associated reduction");
}

TheoreticalCosts theoretical_costs(Digit b, std::size_t m, std::size_t s, std::size_t tau, const ReductionIndices& w,
                                   ProductAlgorithm algo) {
    if (w.size() != s) throw ValidationError("w must have s entries");
    const double bm = std::pow(static_cast<double>(b), static_cast<double>(m));
    const double md = static_cast<double>(m);
    TheoreticalCosts costs;
    if (algo == ProductAlgorithm::standard) {
        costs.generation = static_cast<double>(s) * bm * md * md;
        costs.product = bm * static_cast<double>(s) * static_cast<double>(tau);
        return costs;
    }
    const std::size_t active = s_star(w, m);
    for (std::size_t j = 0; j < active; ++j) {
        const double kept = static_cast<double>(m - w[j]);
        const double block = std::pow(static_cast<double>(b), kept);
        costs.product += block * static_cast<double>(tau);
        switch (algo) {
        case ProductAlgorithm::row: costs.generation += bm * md * kept; break;
        case ProductAlgorithm::column: costs.generation += block * md * kept; break;
        case ProductAlgorithm::column_row: costs.generation += block * kept * kept; break;
        case ProductAlgorithm::standard: break;
        }
    }
    return costs;
}

ProductResult<double> run_product(ProductAlgorithm algo, const GeneratingSet& g, const ReductionIndices& w,
                                  const DenseMatrix& a, bool force) {
    require_finite(a, "A");
    switch (algo) {
    case ProductAlgorithm::standard:
        if (a.rows() != g.s()) throw ValidationError("A must have s rows");
        return standard_net_product(g, a);
    case ProductAlgorithm::row: return row_reduced_product(g, w, a);
    case ProductAlgorithm::column: return column_reduced_product(g, w, a, force);
    case ProductAlgorithm::column_row: return column_row_reduced_product(g, w, a, force);
    }
    throw ValidationError("unknown product algorithm");
}

double max_relative_error(const DenseMatrix& x, const DenseMatrix& y, const DenseMatrix& points, const DenseMatrix& a) {
    if (x.rows() != y.rows() || x.cols() != y.cols() || points.rows() != x.rows() || a.cols() != x.cols() ||
        points.cols() != a.rows()) {
        throw ValidationError("max_relative_error: shape mismatch");
    }
    double worst = 0;
    for (std::size_t k = 0; k < x.rows(); ++k) {
        for (std::size_t l = 0; l < x.cols(); ++l) {
            double scale = 0;
            for (std::size_t j = 0; j < a.rows(); ++j) scale += std::abs(points(k, j) * a(j, l));
            const double diff = std::abs(x(k, l) - y(k, l));
            if (diff == 0) continue;
            if (scale == 0) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, diff / scale);
        }
    }
    return worst;
}

} // namespace rdn
