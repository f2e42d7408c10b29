// Command-line front end: one subcommand per stage of the pipeline.

#include "rdn/bench.hpp"
#include "rdn/discrepancy.hpp"
#include "rdn/errors.hpp"
#include "rdn/io.hpp"
#include "rdn/qmc.hpp"
#include "rdn/quality.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using nlohmann::ordered_json;
using namespace rdn;

// Subsets are 0-based internally and 1-based for users.
ordered_json subset_json(const Subset& u) {
    ordered_json out = ordered_json::array();
    for (const auto j : u) out.push_back(j + 1);
    return out;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return parts;
        start = pos + 1;
    }
}

std::size_t parse_size(std::string_view text, std::string_view what) {
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size()) {
        throw ValidationError(fmt::format("malformed {} '{}'", what, text));
    }
    return value;
}

// "a..b" (inclusive) or "a,b,c".
std::vector<std::size_t> parse_size_list(std::string_view text, std::string_view what) {
    std::vector<std::size_t> out;
    if (const auto dots = text.find(".."); dots != std::string_view::npos) {
        const auto lo = parse_size(text.substr(0, dots), what);
        const auto hi = parse_size(text.substr(dots + 2), what);
        if (lo > hi) throw ValidationError(fmt::format("empty {} range '{}'", what, text));
        for (auto v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    for (const auto part : split(text, ',')) out.push_back(parse_size(part, what));
    return out;
}

std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    for (const auto part : split(text, ',')) {
        double v = 0;
        const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || ec != std::errc{} || end != part.data() + part.size() || !std::isfinite(v)) {
            throw ValidationError(fmt::format("malformed number '{}'", part));
        }
        out.push_back(v);
    }
    return out;
}

// "1,2;1,3" -> {{0,1},{0,2}}.
std::vector<Subset> parse_subsets(std::string_view text, std::size_t s) {
    std::vector<Subset> out;
    for (const auto group : split(text, ';')) {
        Subset u;
        for (const auto j : parse_size_list(group, "subset index")) {
            if (j == 0 || j > s) throw ValidationError(fmt::format("subset index {} outside 1..{}", j, s));
            u.push_back(j - 1);
        }
        std::sort(u.begin(), u.end());
        if (std::adjacent_find(u.begin(), u.end()) != u.end()) throw ValidationError("subset repeats an index");
        out.push_back(std::move(u));
    }
    return out;
}

std::vector<ProductAlgorithm> parse_algorithms(std::string_view text) {
    std::vector<ProductAlgorithm> out;
    for (const auto part : split(text, ',')) out.push_back(parse_product_algorithm(part));
    return out;
}

std::string strip_prefix(std::string text, std::string_view prefix) {
    if (text.rfind(prefix, 0) == 0) text.erase(0, prefix.size());
    return text;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_text_file(path, text);
    }
}

GeneratingSet construct(const std::string& kind, Digit b, std::size_t m, std::size_t s, std::uint64_t seed) {
    if (kind == "random") return random_generating_set(b, m, s, seed);
    if (kind == "pascal") return pascal_generating_set(b, m, s);
    if (kind == "identity") return identity_generating_set(b, m, s);
    throw ValidationError(fmt::format("unknown construction '{}'", kind));
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
    Digit b = 2;
    std::size_t m = 4;
    std::size_t s = 1;
    std::uint64_t seed = 1;
    std::string construction = "random";
    std::string out;
    std::string net;
};

void run_gen(const GenArgs& args) {
    const auto g = construct(args.construction, args.b, args.m, args.s, args.seed);
    save_generating_set(args.out, g);
    if (!args.net.empty()) {
        std::ostringstream csv;
        write_net_csv(csv, generate_net(g));
        write_text_file(args.net, csv.str());
    }
}

// --- reduce ----------------------------------------------------------------

struct ReduceArgs {
    std::string file;
    std::string kind = "row";
    std::string w;
    std::string w_rows;
    std::string w_cols;
    bool force = false;
    std::string out;
};

GeneratingSet apply_reduction(const GeneratingSet& g, const std::string& kind_name, const std::string& w,
                              const std::string& w_rows, const std::string& w_cols, bool force) {
    const auto kind = parse_reduction_kind(kind_name);
    const ReduceOptions opts{force, stderr_warning};
    if (kind == ReductionKind::mixed) {
        if (w_rows.empty() || w_cols.empty()) throw ValidationError("mixed reduction needs --w-rows and --w-cols");
        return mixed_reduce(g, parse_indices(w_rows, g.modulus(), g.m(), g.s()),
                            parse_indices(w_cols, g.modulus(), g.m(), g.s()), opts);
    }
    if (w.empty()) throw ValidationError("--w is required");
    return reduce(g, kind, parse_indices(w, g.modulus(), g.m(), g.s()), opts);
}

void run_reduce(const ReduceArgs& args) {
    const auto g = load_generating_set(args.file);
    save_generating_set(args.out, apply_reduction(g, args.kind, args.w, args.w_rows, args.w_cols, args.force));
}

// --- quality ---------------------------------------------------------------

struct QualityArgs {
    std::string file;
    std::string kind = "row";
    std::string w;
    std::string w_rows;
    std::string w_cols;
    bool projections = false;
    bool force = false;
    std::uint64_t budget = QualityOptions{}.composition_budget;
    std::string out;
};

void run_quality(const QualityArgs& args) {
    const auto g = load_generating_set(args.file);
    QualityOptions opts;
    opts.composition_budget = args.budget;
    const auto kind = parse_reduction_kind(args.kind);
    const bool reduced = !args.w.empty() || (!args.w_rows.empty() && !args.w_cols.empty());

    ordered_json report;
    report["rho"] = rho_m(g, opts);
    report["t"] = g.m() - report["rho"].get<std::size_t>();
    if (reduced) {
        BoundCheck check;
        if (kind == ReductionKind::mixed) {
            check = check_mixed_bounds(g, parse_indices(args.w_rows, g.modulus(), g.m(), g.s()),
                                       parse_indices(args.w_cols, g.modulus(), g.m(), g.s()), args.force, opts);
        } else {
            const auto w = parse_indices(args.w, g.modulus(), g.m(), g.s());
            switch (kind) {
            case ReductionKind::row: check = check_row_reduced_bounds(g, w, opts); break;
            case ReductionKind::column: check = check_column_bounds(g, w, args.force, opts); break;
            default: check = check_column_row_bounds(g, w, args.force, opts); break;
            }
        }
        ordered_json bounds;
        bounds["kind"] = args.kind;
        bounds["rho_reduced"] = check.rho_reduced;
        bounds["t_reduced"] = check.t_reduced;
        bounds["lower"] = check.rho_lower;
        bounds["upper"] = check.rho_upper;
        bounds["t_upper"] = check.t_upper;
        if (check.strict_checked) bounds["strict_upper"] = check.strict_upper;
        bounds["pass"] = check.pass;
        report["bounds"] = bounds;
    } else {
        report["bounds"] = nullptr;
    }

    ordered_json per = ordered_json::array();
    if (args.projections) {
        if (reduced && kind != ReductionKind::mixed) {
            const auto w = parse_indices(args.w, g.modulus(), g.m(), g.s());
            for (const auto& c : check_projection_bounds(g, w, kind, args.force, opts)) {
                ordered_json bound{{"rho_reduced", c.rho_reduced}, {"lower", c.rho_lower}, {"upper", c.rho_upper},
                                   {"t_reduced", c.t_reduced},    {"t_upper", c.t_upper}};
                per.push_back({{"u", subset_json(c.u)}, {"t_u", c.t_u}, {"bound", bound}, {"pass", c.pass}});
            }
        } else {
            for (const auto& p : quality_report(g, true, opts).per_projection) {
                per.push_back({{"u", subset_json(p.u)}, {"t_u", p.t}, {"bound", nullptr}, {"pass", true}});
            }
        }
    }
    report["per_projection"] = per;
    emit(args.out, report.dump(2) + "\n");
}

// --- prod ------------------------------------------------------------------

struct ProdArgs {
    std::string file;
    std::string a;
    std::string algo = "standard";
    std::string w = "zero";
    std::string kind;
    bool force = false;
    std::string out;
    std::string sidecar;
};

void run_prod(const ProdArgs& args) {
    auto g = load_generating_set(args.file);
    const auto a = load_dense_csv(args.a);
    const auto algo = parse_product_algorithm(args.algo);
    const auto w = parse_indices(args.w, g.modulus(), g.m(), g.s());

    ProductResult<double> result;
    if (algo == ProductAlgorithm::standard && !args.kind.empty()) {
        // Standard product on an explicitly reduced net, for cross-checks against the fast algorithms.
        g = reduce(g, parse_reduction_kind(args.kind), w, ReduceOptions{args.force, stderr_warning});
    }
    result = run_product(algo, g, w, a, args.force);

    std::ostringstream csv;
    write_dense_csv(csv, result.value);
    emit(args.out, csv.str());

    const auto costs = theoretical_costs(g.modulus(), g.m(), g.s(), a.cols(), w, algo);
    ordered_json side;
    side["algo"] = args.algo;
    side["op_counts"] = {{"scalar_mults", result.counts.scalar_mults},
                         {"scalar_adds", result.counts.scalar_adds},
                         {"table_lookups", result.counts.table_lookups},
                         {"digit_ops", result.counts.digit_ops}};
    side["theoretical"] = {{"generation", costs.generation}, {"product", costs.product}, {"total", costs.total()}};
    std::string sidecar = args.sidecar;
    if (sidecar.empty() && !args.out.empty() && args.out != "-") sidecar = args.out + ".json";
    if (!sidecar.empty()) write_text_file(sidecar, side.dump(2) + "\n");
}

// --- disc ------------------------------------------------------------------

struct DiscArgs {
    std::string file;
    std::string w = "zero";
    std::string kind = "row";
    std::string gamma = "j^-2";
    std::optional<std::size_t> t;
    std::string subsets;
    std::size_t enumeration_limit = DiscBoundOptions{}.enumeration_limit;
    bool force = false;
    std::string out;
};

void run_disc(const DiscArgs& args) {
    const auto g = load_generating_set(args.file);
    const auto kind = parse_reduction_kind(args.kind);
    if (kind == ReductionKind::mixed) throw ValidationError("disc supports row, column and column_row");
    if (kind != ReductionKind::row && !g.from_sequence() && !args.force) {
        throw ValidationError("column-type bounds need generating matrices derived from a (t,s)-sequence");
    }
    const auto w = parse_indices(args.w, g.modulus(), g.m(), g.s());
    const auto weights = parse_weights(strip_prefix(args.gamma, "gamma="), g.s());

    ProjectionTMap t_map;
    if (args.t) {
        t_map.global_t = *args.t;
    } else {
        const QualityOptions opts;
        t_map = ProjectionTMap::from_report(quality_report(g, g.s() <= opts.projection_limit, opts));
    }
    DiscBoundOptions opts;
    opts.enumeration_limit = args.enumeration_limit;
    if (!args.subsets.empty()) opts.subsets = parse_subsets(args.subsets, g.s());

    const BoundInputs inputs{g.modulus(), g.m(), w, weights, t_map};
    const auto bound = weighted_disc_bound(inputs, kind, opts);

    ordered_json out;
    out["term1"] = bound.term1.vacuous ? ordered_json(nullptr) : ordered_json(bound.term1.value);
    out["term2"] = bound.term2 ? ordered_json(*bound.term2) : ordered_json(nullptr);
    out["term3"] = bound.term3 ? ordered_json(*bound.term3) : ordered_json(nullptr);
    out["bound"] = bound.bound;
    out["argmax_subset"] = subset_json(bound.argmax_subset);
    out["term3_exhaustive"] = bound.term3_exhaustive;
    emit(args.out, out.dump(2) + "\n");
}

// --- integrate ---------------------------------------------------------------

struct IntegrateArgs {
    std::string construction = "pascal";
    Digit b = 2;
    std::size_t s = 2;
    std::uint64_t seed = 1;
    std::string m_range = "4..10";
    std::string w = "log2";
    std::string kind = "row";
    std::string a;
    std::string f = "exponential";
    std::string c;
    double offset = 0;
    std::string gamma = "j^-2";
    bool force = false;
    std::size_t jobs = 1;
    std::string out;
};

void run_integrate(const IntegrateArgs& args) {
    const auto ms = parse_size_list(args.m_range, "m");
    const auto a = load_dense_csv(args.a);
    if (a.rows() != args.s) throw ValidationError("A must have s rows");

    ErrorReportConfig config;
    config.source = [&args](std::size_t m) { return construct(args.construction, args.b, m, args.s, args.seed); };
    config.indices = [&args](std::size_t m) { return parse_indices(args.w, args.b, m, args.s); };
    config.kind = parse_reduction_kind(args.kind);
    config.a = a;
    config.f.kind = parse_integrand_kind(args.f);
    config.f.c = args.c.empty() ? std::vector<double>(a.cols(), 1.0) : parse_double_list(args.c);
    config.f.offset = args.offset;
    config.m_min = *std::min_element(ms.begin(), ms.end());
    config.m_max = *std::max_element(ms.begin(), ms.end());
    config.weights = parse_weights(strip_prefix(args.gamma, "gamma="), args.s);
    config.force = args.force;
    config.jobs = std::max<std::size_t>(args.jobs, 1);
    if (config.kind != ReductionKind::row && args.construction == "random" && !args.force) {
        throw ValidationError("column-type reductions need a sequence-derived construction (or --force)");
    }

    std::string csv = "m,N,err_unreduced,err_reduced,disc_bound\n";
    for (const auto& row : error_report(config)) {
        if (std::find(ms.begin(), ms.end(), row.m) == ms.end()) continue;
        csv += fmt::format("{},{},{:.17g},{:.17g},{:.17g}\n", row.m, row.n, row.err_unreduced, row.err_reduced,
                           row.disc_bound);
    }
    emit(args.out, csv);
}

// --- bench / plot ------------------------------------------------------------

struct BenchArgs {
    Digit b = 2;
    std::string m = "12";
    std::string s = "50,200,800";
    std::size_t tau = 20;
    std::string schedule = "log2";
    std::string algos = "standard,row,column,column_row";
    std::size_t reps = 5;
    std::uint64_t seed = 1;
    std::string out;
    std::string svg;
};

void run_bench_command(const BenchArgs& args) {
    BenchConfig config;
    config.b = args.b;
    config.m_values = parse_size_list(args.m, "m");
    config.s_values = parse_size_list(args.s, "s");
    config.tau = args.tau;
    config.schedule = args.schedule;
    config.algorithms = parse_algorithms(args.algos);
    config.repetitions = args.reps;
    config.seed = args.seed;
    const auto rows = run_bench(config);
    std::ostringstream csv;
    write_bench_csv(csv, rows);
    emit(args.out, csv.str());
    if (!args.svg.empty()) write_text_file(args.svg, render_svg(rows));
}

void run_plot(const std::string& csv_path, const std::string& out) {
    std::istringstream in(read_text_file(csv_path));
    emit(out, render_svg(read_bench_csv(in)));
}

// --- error reporting ---------------------------------------------------------

int report_error(std::string_view kind, int code, std::string_view message) {
    // One JSON object on one line keeps the failure machine-parseable.
    const ordered_json line{{"error", kind}, {"code", code}, {"message", message}};
    std::cerr << line.dump() << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduced digital nets: generation, reduction, quality, fast products, discrepancy bounds"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a generating set");
    gen_cmd->add_option("--b", gen.b, "Prime base")->default_val(2);
    gen_cmd->add_option("--m", gen.m, "Digits per coordinate")->required();
    gen_cmd->add_option("--s", gen.s, "Dimension")->required();
    gen_cmd->add_option("--seed", gen.seed, "Seed for random matrices")->default_val(1);
    gen_cmd->add_option("--construction", gen.construction, "random | pascal | identity")->default_val("random");
    gen_cmd->add_option("--out", gen.out, "Generating-set file")->required();
    gen_cmd->add_option("--net", gen.net, "Also write the net as CSV");

    ReduceArgs red;
    auto* red_cmd = app.add_subcommand("reduce", "Reduce a generating set");
    red_cmd->add_option("file", red.file)->required();
    red_cmd->add_option("--kind", red.kind, "row | column | column_row | mixed")->default_val("row");
    red_cmd->add_option("--w", red.w, "Indices: comma list, log2, log2sqrt or zero");
    red_cmd->add_option("--w-rows", red.w_rows, "Row indices for mixed reduction");
    red_cmd->add_option("--w-cols", red.w_cols, "Column indices for mixed reduction");
    red_cmd->add_flag("--force", red.force, "Allow column reductions of non-sequence matrices");
    red_cmd->add_option("--out", red.out)->required();

    QualityArgs qual;
    auto* qual_cmd = app.add_subcommand("quality", "Certify rho and t, optionally against reduction bounds");
    qual_cmd->add_option("file", qual.file)->required();
    qual_cmd->add_option("--kind", qual.kind)->default_val("row");
    qual_cmd->add_option("--w", qual.w);
    qual_cmd->add_option("--w-rows", qual.w_rows);
    qual_cmd->add_option("--w-cols", qual.w_cols);
    qual_cmd->add_flag("--projections", qual.projections, "Report every non-empty projection");
    qual_cmd->add_flag("--force", qual.force);
    qual_cmd->add_option("--budget", qual.budget, "Largest composition count examined per level");
    qual_cmd->add_option("--out", qual.out, "JSON output (default stdout)");

    ProdArgs prod;
    auto* prod_cmd = app.add_subcommand("prod", "Multiply the net's point matrix by A");
    prod_cmd->add_option("file", prod.file)->required();
    prod_cmd->add_option("--A", prod.a, "Dense matrix CSV (s rows)")->required();
    prod_cmd->add_option("--algo", prod.algo, "standard | row | column | column_row")->default_val("standard");
    prod_cmd->add_option("--w", prod.w)->default_val("zero");
    prod_cmd->add_option("--kind", prod.kind, "With --algo standard: reduce this way first");
    prod_cmd->add_flag("--force", prod.force);
    prod_cmd->add_option("--out", prod.out, "Product CSV (default stdout)");
    prod_cmd->add_option("--sidecar", prod.sidecar, "JSON with operation counts (default <out>.json)");

    DiscArgs disc;
    auto* disc_cmd = app.add_subcommand("disc", "Weighted star discrepancy bound of a reduced net");
    disc_cmd->add_option("file", disc.file)->required();
    disc_cmd->add_option("--w", disc.w)->default_val("zero");
    disc_cmd->add_option("--kind", disc.kind)->default_val("row");
    disc_cmd->add_option("--gamma", disc.gamma, "j^-<p> or a comma list")->default_val("j^-2");
    disc_cmd->add_option("--t", disc.t, "Use this t for every projection instead of computing t_u");
    disc_cmd->add_option("--subsets", disc.subsets, "Third-term subsets, e.g. 1,2;1,3");
    disc_cmd->add_option("--enumeration-limit", disc.enumeration_limit);
    disc_cmd->add_flag("--force", disc.force);
    disc_cmd->add_option("--out", disc.out);

    IntegrateArgs integ;
    auto* integ_cmd = app.add_subcommand("integrate", "QMC error table over a range of m");
    integ_cmd->add_option("--construction", integ.construction)->default_val("pascal");
    integ_cmd->add_option("--b", integ.b)->default_val(2);
    integ_cmd->add_option("--s", integ.s)->required();
    integ_cmd->add_option("--seed", integ.seed)->default_val(1);
    integ_cmd->add_option("--m", integ.m_range, "a..b or a list")->default_val("4..10");
    integ_cmd->add_option("--w", integ.w)->default_val("log2");
    integ_cmd->add_option("--kind", integ.kind)->default_val("row");
    integ_cmd->add_option("--A", integ.a)->required();
    integ_cmd->add_option("--f", integ.f, "linear | exponential")->default_val("exponential");
    integ_cmd->add_option("--c", integ.c, "Integrand coefficients (default all ones)");
    integ_cmd->add_option("--offset", integ.offset, "Constant term of a linear integrand");
    integ_cmd->add_option("--gamma", integ.gamma)->default_val("j^-2");
    integ_cmd->add_flag("--force", integ.force);
    integ_cmd->add_option("--jobs", integ.jobs, "Worker threads over m")->default_val(1);
    integ_cmd->add_option("--out", integ.out);

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time the product algorithms");
    bench_cmd->add_option("--b", bench.b)->default_val(2);
    bench_cmd->add_option("--m", bench.m, "a..b or a list")->default_val("12");
    bench_cmd->add_option("--s", bench.s, "a..b or a list")->default_val("50,200,800");
    bench_cmd->add_option("--tau", bench.tau)->default_val(20);
    bench_cmd->add_option("--schedule", bench.schedule)->default_val("log2");
    bench_cmd->add_option("--algos", bench.algos)->default_val("standard,row,column,column_row");
    bench_cmd->add_option("--reps", bench.reps)->default_val(5);
    bench_cmd->add_option("--seed", bench.seed)->default_val(1);
    bench_cmd->add_option("--out", bench.out, "CSV (default stdout)");
    bench_cmd->add_option("--svg", bench.svg, "Also write a chart");

    std::string plot_csv;
    std::string plot_out;
    auto* plot_cmd = app.add_subcommand("plot", "Render a bench CSV as SVG");
    plot_cmd->add_option("csv", plot_csv)->required();
    plot_cmd->add_option("--out", plot_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage", 2, e.what());
    }

    try {
        if (*gen_cmd) run_gen(gen);
        else if (*red_cmd) run_reduce(red);
        else if (*qual_cmd) run_quality(qual);
        else if (*prod_cmd) run_prod(prod);
        else if (*disc_cmd) run_disc(disc);
        else if (*integ_cmd) run_integrate(integ);
        else if (*bench_cmd) run_bench_command(bench);
        else if (*plot_cmd) run_plot(plot_csv, plot_out);
    } catch (const ValidationError& e) {
        return report_error("validation", 2, e.what());
    } catch (const BudgetError& e) {
        return report_error("budget", 3, e.what());
    } catch (const IoError& e) {
        return report_error("io", 4, e.what());
    }
    return 0;
}
