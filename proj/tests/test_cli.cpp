// Drives the rdn executable end to end through the shell.

#include "rdn/fast_product.hpp"
#include "rdn/io.hpp"
#include "rdn/reduction.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>

using namespace rdn;
namespace fs = std::filesystem;

namespace {

struct Workspace {
    fs::path dir;

    Workspace() {
        dir = fs::temp_directory_path() / fs::path("rdn_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Workspace() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }

    [[nodiscard]] std::string path(const std::string& name) const { return (dir / name).string(); }

    // Runs `rdn <args>` with stdout and stderr captured to files; returns the exit code.
    int run(const std::string& args) const {
        const std::string cmd = std::string(RDN_CLI_PATH) + " " + args + " > " + path("stdout.txt") + " 2> " +
                                path("stderr.txt");
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    [[nodiscard]] std::string out() const { return read_text_file(path("stdout.txt")); }
    [[nodiscard]] std::string err() const { return read_text_file(path("stderr.txt")); }
};

nlohmann::json error_line(const Workspace& ws) {
    const auto text = ws.err();
    REQUIRE(std::count(text.begin(), text.end(), '\n') == 1);
    return nlohmann::json::parse(text);
}

} // namespace

TEST_CASE("gen then quality emits a JSON report") {
    Workspace ws;
    REQUIRE(ws.run("gen --b 2 --m 4 --s 3 --seed 7 --out " + ws.path("g.txt")) == 0);
    REQUIRE(ws.run("quality " + ws.path("g.txt")) == 0);
    const auto report = nlohmann::json::parse(ws.out());
    CHECK(report["rho"].get<int>() + report["t"].get<int>() == 4);
    CHECK(report["bounds"].is_null());
    CHECK(report["per_projection"].empty());

    REQUIRE(ws.run("quality " + ws.path("g.txt") + " --kind row --w 0,1,2 --projections") == 0);
    const auto full = nlohmann::json::parse(ws.out());
    CHECK(full["bounds"]["pass"].get<bool>());
    CHECK(full["bounds"].contains("lower"));
    CHECK(full["bounds"].contains("upper"));
    REQUIRE(full["per_projection"].size() == 7);
    for (const auto& p : full["per_projection"]) {
        CHECK(p["pass"].get<bool>());
        CHECK(p.contains("u"));
        CHECK(p.contains("t_u"));
        CHECK(p["bound"].contains("lower"));
    }
}

TEST_CASE("reduce writes a file that reparses to the reduced set") {
    Workspace ws;
    REQUIRE(ws.run("gen --b 3 --m 4 --s 3 --seed 2 --out " + ws.path("g.txt")) == 0);
    REQUIRE(ws.run("reduce " + ws.path("g.txt") + " --kind row --w 0,1,2 --out " + ws.path("gr.txt")) == 0);
    const auto g = load_generating_set(ws.path("g.txt"));
    const auto w = ReductionIndices(std::vector<std::uint64_t>{0, 1, 2});
    CHECK(load_generating_set(ws.path("gr.txt")) == row_reduce(g, w, ReduceOptions{false, nullptr}));

    REQUIRE(ws.run("gen --b 3 --m 4 --s 3 --construction pascal --out " + ws.path("p.txt")) == 0);
    REQUIRE(ws.run("reduce " + ws.path("p.txt") + " --kind mixed --w-rows 0,1,1 --w-cols 0,0,2 --out " +
                   ws.path("pm.txt")) == 0);
    CHECK(load_generating_set(ws.path("pm.txt")).from_sequence());

    // Column reduction of random matrices needs --force.
    CHECK(ws.run("reduce " + ws.path("g.txt") + " --kind column --w 0,1,2 --out " + ws.path("gc.txt")) == 2);
    CHECK(ws.run("reduce " + ws.path("g.txt") + " --kind column --w 0,1,2 --force --out " + ws.path("gc.txt")) == 0);
}

TEST_CASE("prod algorithms agree and write a sidecar") {
    Workspace ws;
    REQUIRE(ws.run("gen --b 2 --m 6 --s 3 --seed 4 --out " + ws.path("g.txt")) == 0);
    REQUIRE(ws.run("reduce " + ws.path("g.txt") + " --kind row --w 0,1,2 --out " + ws.path("gr.txt")) == 0);
    write_text_file(ws.path("a.csv"), "0.5,-1.25\n0.3,2\n-0.7,0.1\n");

    REQUIRE(ws.run("prod " + ws.path("gr.txt") + " --A " + ws.path("a.csv") + " --algo row --w 0,1,2 --out " +
                   ws.path("row.csv")) == 0);
    REQUIRE(ws.run("prod " + ws.path("gr.txt") + " --A " + ws.path("a.csv") + " --algo standard --out " +
                   ws.path("std.csv")) == 0);
    const auto row = load_dense_csv(ws.path("row.csv"));
    const auto standard = load_dense_csv(ws.path("std.csv"));
    const auto x = point_matrix(generate_net(load_generating_set(ws.path("gr.txt"))));
    CHECK(max_relative_error(row, standard, x, load_dense_csv(ws.path("a.csv"))) <= 1e-12);

    const auto side = nlohmann::json::parse(read_text_file(ws.path("row.csv.json")));
    CHECK(side["op_counts"]["scalar_mults"].get<std::uint64_t>() == (64 + 32 + 16) * 2);
    CHECK(side["theoretical"]["product"].get<double>() == (64 + 32 + 16) * 2);

    // The standard algorithm on an explicitly column-reduced net matches the fast column product.
    REQUIRE(ws.run("prod " + ws.path("g.txt") + " --A " + ws.path("a.csv") +
                   " --algo standard --kind column --w log2 --force --out " + ws.path("s2.csv")) == 0);
    REQUIRE(ws.run("prod " + ws.path("g.txt") + " --A " + ws.path("a.csv") + " --algo column --w log2 --force --out " +
                   ws.path("c2.csv")) == 0);
    const auto xc = point_matrix(generate_net(column_reduce(load_generating_set(ws.path("g.txt")),
                                                            log_schedule(2, 6, 3), ReduceOptions{true, nullptr})));
    CHECK(max_relative_error(load_dense_csv(ws.path("s2.csv")), load_dense_csv(ws.path("c2.csv")), xc,
                             load_dense_csv(ws.path("a.csv"))) <= 1e-12);
}

TEST_CASE("disc and integrate outputs") {
    Workspace ws;
    REQUIRE(ws.run("gen --b 2 --m 5 --s 2 --construction pascal --out " + ws.path("p.txt")) == 0);
    REQUIRE(ws.run("disc " + ws.path("p.txt") + " --w log2 --kind column_row --gamma gamma=j^-2") == 0);
    const auto disc = nlohmann::json::parse(ws.out());
    for (const char* key : {"term1", "term2", "term3", "bound", "argmax_subset"}) CHECK(disc.contains(key));
    CHECK(disc["bound"].get<double>() > 0);

    REQUIRE(ws.run("disc " + ws.path("p.txt") + " --w 0,0 --t 0 --subsets 1,2") == 0);
    CHECK(nlohmann::json::parse(ws.out())["argmax_subset"].size() >= 1);

    write_text_file(ws.path("a.csv"), "0.7\n0.4\n");
    REQUIRE(ws.run("integrate --s 2 --m 4..6 --A " + ws.path("a.csv") + " --jobs 2 --out " + ws.path("e.csv")) == 0);
    const auto table = read_text_file(ws.path("e.csv"));
    CHECK(table.rfind("m,N,err_unreduced,err_reduced,disc_bound\n", 0) == 0);
    CHECK(std::count(table.begin(), table.end(), '\n') == 4);
    CHECK(table.find("\n6,64,") != std::string::npos);
}

TEST_CASE("bench and plot") {
    Workspace ws;
    REQUIRE(ws.run("bench --m 4 --s 4,8 --tau 2 --reps 1 --out " + ws.path("b.csv") + " --svg " + ws.path("b.svg")) ==
            0);
    const auto csv = read_text_file(ws.path("b.csv"));
    CHECK(csv.rfind("algo,b,m,s,tau,schedule,wall_ns_median,mults,adds,theory\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
    REQUIRE(ws.run("plot " + ws.path("b.csv") + " --out " + ws.path("p.svg")) == 0);
    CHECK(read_text_file(ws.path("p.svg")) == read_text_file(ws.path("b.svg")));
}

TEST_CASE("failures exit with a code and one JSON error line") {
    Workspace ws;
    CHECK(ws.run("quality " + ws.path("missing.txt")) == 4);
    CHECK(error_line(ws)["error"] == "io");

    write_text_file(ws.path("bad.txt"), "2 2 1 0\n1 0\n0 7\n");
    CHECK(ws.run("quality " + ws.path("bad.txt")) == 2);
    CHECK(error_line(ws)["code"] == 2);

    REQUIRE(ws.run("gen --b 3 --m 6 --s 3 --construction pascal --out " + ws.path("p.txt")) == 0);
    CHECK(ws.run("quality " + ws.path("p.txt") + " --budget 3") == 3);
    CHECK(error_line(ws)["error"] == "budget");

    CHECK(ws.run("gen --b 4 --m 2 --s 1 --out " + ws.path("x.txt")) == 2);
    CHECK(ws.run("frobnicate") == 2);
    CHECK(error_line(ws)["error"] == "usage");
    CHECK(ws.run("reduce " + ws.path("p.txt") + " --kind row --w 2,1,0 --out " + ws.path("y.txt")) == 2);
    CHECK(ws.run("--help") == 0);
}
