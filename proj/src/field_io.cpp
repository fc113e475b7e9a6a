#include "field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace bmtk {

namespace fs = std::filesystem;

namespace {

static_assert(std::endian::native == std::endian::little, "f64le field files assume a little-endian host");

fs::path sibling_bin(const fs::path& header_path) {
    fs::path p = header_path;
    p.replace_extension(".bin");
    return p;
}

std::string kind_name(FieldKind k) {
    return k == FieldKind::scalar ? "scalar" : "component-of-vector";
}

FieldKind kind_from(const std::string& s) {
    if (s == "scalar") return FieldKind::scalar;
    if (s == "component-of-vector") return FieldKind::vector_component;
    fail_io("unknown field kind '" + s + "'");
}

}  // namespace

void write_json(const Json& j, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_io("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

Json read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_io("cannot read " + path.string());
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail_io("invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

void write_field(const RealField& f, const fs::path& header_path) {
    Json header;
    header["dim"] = f.grid().dim;
    header["size"] = f.grid().size;
    header["length"] = f.grid().length;
    header["kind"] = kind_name(f.kind);
    header["dtype"] = "f64le";
    header["order"] = "row-major";
    write_json(header, header_path);

    std::ofstream bin(sibling_bin(header_path), std::ios::binary);
    if (!bin) fail_io("cannot write " + sibling_bin(header_path).string());
    bin.write(reinterpret_cast<const char*>(f.data()),
              static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (!bin) fail_io("short write to " + sibling_bin(header_path).string());
}

RealField read_field(const fs::path& header_path) {
    Json header = read_json(header_path);
    Grid g(header.at("dim").get<int>(), header.at("size").get<int>(), header.at("length").get<double>());
    if (header.at("dtype").get<std::string>() != "f64le") fail_io("unsupported dtype");
    if (header.at("order").get<std::string>() != "row-major") fail_io("unsupported sample order");

    std::ifstream bin(sibling_bin(header_path), std::ios::binary);
    if (!bin) fail_io("cannot read " + sibling_bin(header_path).string());
    std::vector<double> samples(g.point_count());
    bin.read(reinterpret_cast<char*>(samples.data()),
             static_cast<std::streamsize>(samples.size() * sizeof(double)));
    if (bin.gcount() != static_cast<std::streamsize>(samples.size() * sizeof(double)))
        fail_io("short read from " + sibling_bin(header_path).string());
    RealField f(g, std::move(samples));
    f.kind = kind_from(header.at("kind").get<std::string>());
    return f;
}

void write_vector_field(const VectorField& v, const fs::path& stem) {
    for (int d = 0; d < v.dim(); ++d) {
        fs::path p = stem;
        p += ".c" + std::to_string(d) + ".json";
        write_field(v[d], p);
    }
}

VectorField read_vector_field(const fs::path& stem, int dim) {
    std::vector<RealField> comps;
    for (int d = 0; d < dim; ++d) {
        fs::path p = stem;
        p += ".c" + std::to_string(d) + ".json";
        comps.push_back(read_field(p));
    }
    return VectorField(std::move(comps));
}

void write_decomposition(const DyadicDecomposition& d, const fs::path& dir, const std::string& stem) {
    fs::create_directories(dir);
    Json manifest;
    manifest["j_min"] = d.j_min;
    manifest["j_max"] = d.j_max;
    manifest["homogeneous"] = d.homogeneous;
    manifest["mean"] = d.mean;
    Json blocks = Json::array();
    for (int j = d.j_min; j <= d.j_max; ++j) {
        std::string name = stem + ".j" + (j < 0 ? "m" + std::to_string(-j) : std::to_string(j)) + ".json";
        write_field(d.block(j), dir / name);
        blocks.push_back(name);
    }
    manifest["blocks"] = blocks;
    write_json(manifest, dir / (stem + ".decomp.json"));
}

DyadicDecomposition read_decomposition(const fs::path& dir, const std::string& stem) {
    Json manifest = read_json(dir / (stem + ".decomp.json"));
    DyadicDecomposition d;
    d.j_min = manifest.at("j_min").get<int>();
    d.j_max = manifest.at("j_max").get<int>();
    d.homogeneous = manifest.at("homogeneous").get<bool>();
    d.mean = manifest.at("mean").get<double>();
    for (const auto& name : manifest.at("blocks")) d.blocks.push_back(read_field(dir / name.get<std::string>()));
    if (d.blocks.empty()) fail_io("decomposition manifest lists no blocks");
    d.grid = d.blocks[0].grid();
    return d;
}

}  // namespace bmtk
