#include "rdn/bench.hpp"

#include "rdn/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace rdn {

namespace {

constexpr std::string_view csv_header = "algo,b,m,s,tau,schedule,wall_ns_median,mults,adds,theory";

DenseMatrix random_dense(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    DenseMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) a(i, j) = unit(rng);
    }
    return a;
}

// Commas would break the CSV, so explicit lists are stored with ';'.
std::string schedule_label(std::string schedule) {
    std::replace(schedule.begin(), schedule.end(), ',', ';');
    return schedule;
}

std::uint64_t time_once(ProductAlgorithm algo, const GeneratingSet& g, const ReductionIndices& w,
                        const DenseMatrix& a, ProductResult<double>& out) {
    const auto start = std::chrono::steady_clock::now();
    out = run_product(algo, g, w, a, true);
    const auto stop = std::chrono::steady_clock::now();
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream stream(line);
    std::string cell;
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

template <typename T>
T parse_number(const std::string& text, std::string_view what) {
    try {
        std::size_t used = 0;
        T value{};
        if constexpr (std::is_floating_point_v<T>) {
            value = std::stod(text, &used);
        } else {
            if (!text.empty() && text[0] == '-') throw std::invalid_argument(text);
            value = static_cast<T>(std::stoull(text, &used));
        }
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::logic_error&) {
        throw ValidationError(fmt::format("bench CSV: malformed {} '{}'", what, text));
    }
}

std::string_view algo_colour(ProductAlgorithm algo) {
    switch (algo) {
    case ProductAlgorithm::standard: return "#1f77b4";
    case ProductAlgorithm::row: return "#ff7f0e";
    case ProductAlgorithm::column: return "#2ca02c";
    case ProductAlgorithm::column_row: return "#d62728";
    }
    return "#000000";
}

std::string format_x(double v) { return fmt::format("{:g}", v); }

} // namespace

void validate(const BenchConfig& config) {
    require_prime_modulus(config.b);
    if (config.m_values.empty() || config.s_values.empty()) throw ValidationError("bench ranges must be non-empty");
    if (config.algorithms.empty()) throw ValidationError("bench needs at least one algorithm");
    if (config.repetitions == 0) throw ValidationError("repetitions must be at least 1");
    if (config.tau == 0) throw ValidationError("tau must be positive");
    for (const auto m : config.m_values) {
        if (m == 0) throw ValidationError("m must be positive");
        for (const auto s : config.s_values) {
            if (s == 0) throw ValidationError("s must be positive");
            const auto n = checked_pow(config.b, m);
            if (n > config.max_cells / s) {
                throw BudgetError(fmt::format("bench point b^m * s = {} * {} exceeds the limit {}", n, s,
                                              config.max_cells));
            }
        }
    }
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
    validate(config);
    std::vector<BenchRow> rows;
    for (const auto m : config.m_values) {
        for (const auto s : config.s_values) {
            const auto g = random_generating_set(config.b, m, s, config.seed);
            const auto a = random_dense(s, config.tau, config.seed ^ 0x9e3779b97f4a7c15ULL);
            const auto w = parse_indices(config.schedule, config.b, m, s);
            // Repetitions are interleaved across algorithms so that slow drift in
            // machine speed shifts every median alike instead of favouring one.
            const std::size_t count = config.algorithms.size();
            std::vector<ProductResult<double>> results(count);
            std::vector<std::vector<std::uint64_t>> times(count);
            for (std::size_t i = 0; i < count; ++i) time_once(config.algorithms[i], g, w, a, results[i]); // warm-up
            for (std::size_t r = 0; r < config.repetitions; ++r) {
                for (std::size_t i = 0; i < count; ++i) {
                    times[i].push_back(time_once(config.algorithms[i], g, w, a, results[i]));
                }
            }
            for (std::size_t i = 0; i < count; ++i) {
                auto& t = times[i];
                std::nth_element(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(t.size() / 2), t.end());
                const auto algo = config.algorithms[i];

                BenchRow row;
                row.algo = algo;
                row.b = config.b;
                row.m = m;
                row.s = s;
                row.tau = config.tau;
                row.schedule = schedule_label(config.schedule);
                row.wall_ns_median = t[t.size() / 2];
                row.mults = results[i].counts.scalar_mults;
                row.adds = results[i].counts.scalar_adds;
                row.theory = theoretical_costs(config.b, m, s, config.tau, w, algo).total();
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << csv_header << '\n';
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{:.17g}\n", to_string(r.algo), r.b, r.m, r.s, r.tau,
                           r.schedule, r.wall_ns_median, r.mults, r.adds, r.theory);
    }
}

std::vector<BenchRow> read_bench_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("bench CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header) throw ValidationError("bench CSV header mismatch");
    std::vector<BenchRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != 10) throw ValidationError(fmt::format("bench CSV row has {} cells, expected 10", cells.size()));
        BenchRow r;
        r.algo = parse_product_algorithm(cells[0]);
        r.b = parse_number<Digit>(cells[1], "b");
        r.m = parse_number<std::size_t>(cells[2], "m");
        r.s = parse_number<std::size_t>(cells[3], "s");
        r.tau = parse_number<std::size_t>(cells[4], "tau");
        r.schedule = cells[5];
        r.wall_ns_median = parse_number<std::uint64_t>(cells[6], "wall_ns_median");
        r.mults = parse_number<std::uint64_t>(cells[7], "mults");
        r.adds = parse_number<std::uint64_t>(cells[8], "adds");
        r.theory = parse_number<double>(cells[9], "theory");
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string render_svg(const std::vector<BenchRow>& rows) {
    constexpr double width = 720, height = 480;
    constexpr double left = 80, right = 170, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    std::set<std::size_t> s_seen;
    for (const auto& r : rows) s_seen.insert(r.s);
    const bool by_s = s_seen.size() > 1;
    const auto x_of = [by_s](const BenchRow& r) { return static_cast<double>(by_s ? r.s : r.m); };

    // One series per algorithm, points sorted by x.
    std::map<ProductAlgorithm, std::map<double, double>> series;
    for (const auto& r : rows) {
        series[r.algo][x_of(r)] = std::log10(static_cast<double>(std::max<std::uint64_t>(r.wall_ns_median, 1)));
    }

    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    if (!rows.empty()) {
        x_min = x_max = x_of(rows.front());
        y_min = y_max = series.begin()->second.begin()->second;
        for (const auto& [algo, pts] : series) {
            for (const auto& [x, y] : pts) {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
        }
        y_min = std::floor(y_min);
        y_max = std::max(std::ceil(y_max), y_min + 1);
    }
    const auto px = [&](double x) {
        return x_max == x_min ? left + plot_w / 2 : left + (x - x_min) / (x_max - x_min) * plot_w;
    };
    const auto py = [&](double y) { return top + (y_max - y) / (y_max - y_min) * plot_h; };

    std::string svg;
    svg += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
                       width, height, width, height);
    svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" style=\"fill:#ffffff\"/>\n", width, height);
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" style=\"fill:none;stroke:#000000\"/>\n",
                       left, top, plot_w, plot_h);

    for (double d = y_min; d <= y_max; d += 1) {
        const double y = py(d);
        svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
                           "style=\"stroke:#cccccc;stroke-width:1\"/>\n",
                           left, y, left + plot_w, y);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" style=\"font:12px sans-serif;text-anchor:end\">1e{}</text>\n",
                           left - 6, y + 4, static_cast<int>(d));
    }

    std::set<double> ticks;
    for (const auto& [algo, pts] : series) {
        for (const auto& [x, y] : pts) ticks.insert(x);
    }
    for (const double x : ticks) {
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" style=\"font:12px sans-serif;text-anchor:middle\">{}</text>\n",
                           px(x), top + plot_h + 18, format_x(x));
    }
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" style=\"font:14px sans-serif;text-anchor:middle\">{}</text>\n",
                       left + plot_w / 2, height - 15, by_s ? "s" : "m");
    svg += fmt::format("<text x=\"20\" y=\"{:.2f}\" style=\"font:14px sans-serif;text-anchor:middle\" "
                       "transform=\"rotate(-90 20 {:.2f})\">median wall time [ns]</text>\n",
                       top + plot_h / 2, top + plot_h / 2);

    std::size_t legend = 0;
    for (const auto& [algo, pts] : series) {
        const auto colour = algo_colour(algo);
        std::string points;
        for (const auto& [x, y] : pts) {
            if (!points.empty()) points += ' ';
            points += fmt::format("{:.2f},{:.2f}", px(x), py(y));
        }
        svg += fmt::format("<polyline points=\"{}\" style=\"fill:none;stroke:{};stroke-width:2\"/>\n", points, colour);
        for (const auto& [x, y] : pts) {
            svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" style=\"fill:{}\"/>\n", px(x), py(y), colour);
        }
        const double ly = top + 10 + 20 * static_cast<double>(legend++);
        const double lx = left + plot_w + 15;
        svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" style=\"stroke:{};stroke-width:2\"/>\n",
                           lx, ly, lx + 25, ly, colour);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" style=\"font:12px sans-serif\">{}</text>\n", lx + 32, ly + 4,
                           to_string(algo));
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace rdn
