#pragma once

#include <filesystem>
#include <string>

#include "lp.hpp"
#include "report.hpp"

namespace bmtk {

/// Field files are a JSON header {dim, size, length, kind, dtype, order}
/// plus a sibling .bin of little-endian doubles; round trips are bit-exact.
void write_field(const RealField& f, const std::filesystem::path& header_path);
RealField read_field(const std::filesystem::path& header_path);

/// Vector fields are stored one component per field file: stem.c0.json, ...
void write_vector_field(const VectorField& v, const std::filesystem::path& stem);
VectorField read_vector_field(const std::filesystem::path& stem, int dim);

/// Decomposition manifest + one field file per block.
void write_decomposition(const DyadicDecomposition& d, const std::filesystem::path& dir,
                         const std::string& stem);
DyadicDecomposition read_decomposition(const std::filesystem::path& dir, const std::string& stem);

void write_json(const Json& j, const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

}  // namespace bmtk
