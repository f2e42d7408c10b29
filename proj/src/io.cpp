#include "rdn/io.hpp"

#include "rdn/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rdn {

namespace {

using BigInt = boost::multiprecision::cpp_int;

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        parts.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return parts;
        start = pos + 1;
    }
}

std::vector<std::string_view> whitespace_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
        throw ValidationError(fmt::format("malformed {} '{}'", what, text));
    }
    return value;
}

std::string_view trim_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

// Reads the next line that is not blank; false at end of input.
bool next_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!whitespace_tokens(line).empty()) return true;
    }
    return false;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

} // namespace

void write_generating_set(std::ostream& out, const GeneratingSet& g) {
    out << g.modulus() << ' ' << g.m() << ' ' << g.s() << ' ' << (g.from_sequence() ? 1 : 0) << '\n';
    for (const auto& c : g.matrices()) {
        for (std::size_t i = 0; i < c.rows(); ++i) {
            for (std::size_t r = 0; r < c.cols(); ++r) {
                if (r > 0) out << ' ';
                out << c(i, r);
            }
            out << '\n';
        }
    }
}

GeneratingSet read_generating_set(std::istream& in) {
    std::string line;
    if (!next_line(in, line)) throw ValidationError("generating-set file is empty");
    const auto header = whitespace_tokens(line);
    if (header.size() != 4) throw ValidationError("generating-set header must be 'b m s from_sequence'");
    const auto b64 = parse_uint(header[0], "b");
    if (b64 > 0x7fffffff) throw ValidationError("b too large");
    const auto b = static_cast<Digit>(b64);
    require_prime_modulus(b);
    const auto m = static_cast<std::size_t>(parse_uint(header[1], "m"));
    const auto s = static_cast<std::size_t>(parse_uint(header[2], "s"));
    const auto flag = parse_uint(header[3], "from_sequence flag");
    if (m == 0 || s == 0) throw ValidationError("m and s must be positive");
    if (flag > 1) throw ValidationError("from_sequence flag must be 0 or 1");
    if (m > 64) throw ValidationError("m too large");

    std::vector<GfMatrix> matrices;
    matrices.reserve(s);
    for (std::size_t j = 0; j < s; ++j) {
        std::vector<Digit> entries;
        entries.reserve(m * m);
        for (std::size_t i = 0; i < m; ++i) {
            if (!next_line(in, line)) {
                throw ValidationError(fmt::format("generating set truncated in matrix {} row {}", j + 1, i + 1));
            }
            const auto tokens = whitespace_tokens(line);
            if (tokens.size() != m) {
                throw ValidationError(fmt::format("matrix {} row {} has {} digits, expected {}", j + 1, i + 1,
                                                  tokens.size(), m));
            }
            for (const auto t : tokens) {
                const auto d = parse_uint(t, "digit");
                if (d >= b) throw ValidationError(fmt::format("digit {} outside F_{}", d, b));
                entries.push_back(static_cast<Digit>(d));
            }
        }
        matrices.emplace_back(b, m, m, std::move(entries));
    }
    if (next_line(in, line)) throw ValidationError("trailing content after the last generating matrix");
    return GeneratingSet(b, m, std::move(matrices), flag == 1);
}

std::string coordinate_text(std::uint64_t numerator, Digit b, std::size_t m) {
    const std::uint64_t den = checked_pow(b, m);
    if (numerator >= den) throw ValidationError("coordinate numerator exceeds b^m");
    if (numerator == 0) return "0";
    if (10 % b != 0) return fmt::format("{}/{}", numerator, den);
    // numerator / b^m = numerator * (10/b)^m / 10^m.
    BigInt scaled = numerator;
    for (std::size_t i = 0; i < m; ++i) scaled *= 10 / b;
    std::string digits = scaled.str();
    digits.insert(0, m - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    return "0." + digits;
}

std::uint64_t parse_coordinate(std::string_view text, Digit b, std::size_t m) {
    const std::uint64_t den = checked_pow(b, m);
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto num = parse_uint(text.substr(0, slash), "coordinate numerator");
        const auto d = parse_uint(text.substr(slash + 1), "coordinate denominator");
        if (d != den) throw ValidationError(fmt::format("coordinate '{}' is not over b^m = {}", text, den));
        if (num >= den) throw ValidationError(fmt::format("coordinate '{}' outside [0,1)", text));
        return num;
    }
    if (text == "0") return 0;
    if (text.size() < 3 || text.substr(0, 2) != "0.") throw ValidationError(fmt::format("malformed coordinate '{}'", text));
    const auto frac = text.substr(2);
    BigInt value = 0;
    BigInt scale = 1;
    for (const char ch : frac) {
        if (ch < '0' || ch > '9') throw ValidationError(fmt::format("malformed coordinate '{}'", text));
        value = value * 10 + (ch - '0');
        scale *= 10;
    }
    // numerator = value * b^m / 10^len must be an integer.
    const BigInt scaled = value * BigInt(den);
    if (scaled % scale != 0) throw ValidationError(fmt::format("coordinate '{}' is not a multiple of b^-m", text));
    return static_cast<std::uint64_t>(scaled / scale);
}

void write_net_csv(std::ostream& out, const DigitalNet& net) {
    out << 'k';
    for (std::size_t j = 1; j <= net.s(); ++j) out << ",x_" << j;
    out << '\n';
    for (std::uint64_t k = 0; k < net.size(); ++k) {
        out << k;
        for (std::size_t j = 0; j < net.s(); ++j) out << ',' << coordinate_text(net.numerator(k, j), net.modulus(), net.m());
        out << '\n';
    }
}

DigitalNet read_net_csv(std::istream& in, Digit b, std::size_t m) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("net CSV is empty");
    const auto header = split(trim_cr(line), ',');
    if (header.size() < 2 || header[0] != "k") throw ValidationError("net CSV header must start with 'k,x_1'");
    const std::size_t s = header.size() - 1;
    for (std::size_t j = 1; j <= s; ++j) {
        if (header[j] != fmt::format("x_{}", j)) throw ValidationError("net CSV header columns must be x_1..x_s");
    }
    const std::uint64_t n = checked_pow(b, m);
    std::vector<std::uint64_t> numerators;
    numerators.reserve(n * s);
    std::uint64_t k = 0;
    while (std::getline(in, line)) {
        const auto row = trim_cr(line);
        if (row.empty()) continue;
        const auto cells = split(row, ',');
        if (cells.size() != s + 1) throw ValidationError(fmt::format("net CSV row {} has the wrong column count", k));
        if (parse_uint(cells[0], "point index") != k) throw ValidationError("net CSV rows must be in index order");
        for (std::size_t j = 0; j < s; ++j) numerators.push_back(parse_coordinate(cells[j + 1], b, m));
        ++k;
    }
    if (k != n) throw ValidationError(fmt::format("net CSV has {} rows, expected b^m = {}", k, n));
    return DigitalNet(b, m, s, std::move(numerators));
}

void write_dense_csv(std::ostream& out, const DenseMatrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (j > 0) out << ',';
            out << fmt::format("{:.17g}", a(i, j));
        }
        out << '\n';
    }
}

DenseMatrix read_dense_csv(std::istream& in) {
    std::string line;
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;
    while (std::getline(in, line)) {
        const auto row = trim_cr(line);
        if (whitespace_tokens(row).empty()) continue;
        const auto cells = split(row, ',');
        if (rows == 0) cols = cells.size();
        if (cells.size() != cols) throw ValidationError(fmt::format("matrix CSV row {} has the wrong column count", rows + 1));
        for (auto cell : cells) {
            const auto tokens = whitespace_tokens(cell);
            if (tokens.size() != 1) throw ValidationError(fmt::format("malformed matrix entry '{}'", cell));
            double value = 0;
            const auto t = tokens[0];
            const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
            if (ec != std::errc{} || end != t.data() + t.size()) {
                throw ValidationError(fmt::format("malformed matrix entry '{}'", t));
            }
            data.push_back(value);
        }
        ++rows;
    }
    if (rows == 0) throw ValidationError("matrix CSV is empty");
    DenseMatrix a(rows, cols, std::move(data));
    require_finite(a, "matrix CSV");
    return a;
}

GeneratingSet load_generating_set(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_generating_set(in);
}

void save_generating_set(const std::filesystem::path& path, const GeneratingSet& g) {
    auto out = open_out(path);
    write_generating_set(out, g);
    finish_write(out, path);
}

DenseMatrix load_dense_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_dense_csv(in);
}

void save_dense_csv(const std::filesystem::path& path, const DenseMatrix& a) {
    auto out = open_out(path);
    write_dense_csv(out, a);
    finish_write(out, path);
}

std::string read_text_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    finish_write(out, path);
}

} // namespace rdn
