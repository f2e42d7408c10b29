#pragma once

#include "rdn/digital_net.hpp"
#include "rdn/fast_product.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace rdn {

/// Line 1 `b m s from_sequence`, then for each C_j its m rows of m space-separated digits.
void write_generating_set(std::ostream& out, const GeneratingSet& g);
GeneratingSet read_generating_set(std::istream& in);

/**
 * Header `k,x_1,...,x_s`, one row per point. Coordinates are exact: a
 * terminating decimal when b divides 10, otherwise `numerator/b^m`.
 */
void write_net_csv(std::ostream& out, const DigitalNet& net);
DigitalNet read_net_csv(std::istream& in, Digit b, std::size_t m);

/// Exact text of numerator / b^m as used by the net CSV.
std::string coordinate_text(std::uint64_t numerator, Digit b, std::size_t m);
std::uint64_t parse_coordinate(std::string_view text, Digit b, std::size_t m);

/// Headerless CSV, `%.17g` entries, so every double survives the round trip.
void write_dense_csv(std::ostream& out, const DenseMatrix& a);
DenseMatrix read_dense_csv(std::istream& in);

// File wrappers: IoError when a file cannot be opened, ValidationError when its content is malformed.
GeneratingSet load_generating_set(const std::filesystem::path& path);
void save_generating_set(const std::filesystem::path& path, const GeneratingSet& g);
DenseMatrix load_dense_csv(const std::filesystem::path& path);
void save_dense_csv(const std::filesystem::path& path, const DenseMatrix& a);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace rdn
