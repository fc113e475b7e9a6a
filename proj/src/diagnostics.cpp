#include "diagnostics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "spectral_ops.hpp"

namespace bmtk {

namespace {

struct VorticityNorms {
    double sup = 0.0;
    double binf_inf = 0.0;
    double binf_1 = 0.0;
};

VorticityNorms vorticity_norms(const VectorField& v) {
    VorticityNorms out;
    if (v.grid().dim == 2) {
        RealField w = curl2(v);
        out.sup = sup_norm(w);
        out.binf_inf = besov_infinity_norm(w, 0.0, kInf, true);
        out.binf_1 = besov_infinity_norm(w, 0.0, 1.0, true);
    } else {
        VectorField w = curl3(v);
        out.sup = sup_norm(w);
        out.binf_inf = besov_infinity_norm(w, 0.0, kInf, true);
        out.binf_1 = besov_infinity_norm(w, 0.0, 1.0, true);
    }
    return out;
}

}  // namespace

DiagnosticsSeries blowup_diagnostics(const MhdSeries& series, const BMParams& bp,
                                     const WindowSet& ws) {
    if (series.v.fields.empty()) fail_invalid("blowup_diagnostics: empty series");
    BMParams inhom = bp;
    inhom.homogeneous = false;

    const std::size_t n = series.v.fields.size();
    DiagnosticsSeries d;
    d.times = series.v.times;
    d.sup_vorticity.resize(n);
    d.b0_inf_inf.resize(n);
    d.b0_inf_1.resize(n);
    d.besov_morrey_v.resize(n);
    const bool with_b = series.has_b();
    if (with_b) {
        d.sup_current.resize(n);
        d.jb0_inf_inf.resize(n);
        d.jb0_inf_1.resize(n);
        d.besov_morrey_b.resize(n);
    }

    parallel_for(n, [&](std::size_t i) {
        VorticityNorms vn = vorticity_norms(series.v.fields[i]);
        d.sup_vorticity[i] = vn.sup;
        d.b0_inf_inf[i] = vn.binf_inf;
        d.b0_inf_1[i] = vn.binf_1;
        d.besov_morrey_v[i] = besov_morrey_norm(series.v.fields[i], inhom, ws);
        if (with_b) {
            VorticityNorms jn = vorticity_norms(series.b.fields[i]);
            d.sup_current[i] = jn.sup;
            d.jb0_inf_inf[i] = jn.binf_inf;
            d.jb0_inf_1[i] = jn.binf_1;
            d.besov_morrey_b[i] = besov_morrey_norm(series.b.fields[i], inhom, ws);
        }
    });

    d.bkm_integral.resize(n);
    d.bkm_integral[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        double dt = d.times[i] - d.times[i - 1];
        d.bkm_integral[i] =
            d.bkm_integral[i - 1] + 0.5 * dt * (d.sup_vorticity[i] + d.sup_vorticity[i - 1]);
    }
    return d;
}

void write_diagnostics_csv(const DiagnosticsSeries& d, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_io("cannot write " + path.string());
    out << "t,sup_vorticity,b0_inf_inf,b0_inf_1,bkm_integral,besov_morrey_v";
    if (d.has_b()) out << ",sup_current,jb0_inf_inf,jb0_inf_1,besov_morrey_b";
    out << "\n";
    char buf[64];
    auto put_first = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    auto put = [&](double v, char lead) {
        std::snprintf(buf, sizeof buf, "%c%.17g", lead, v);
        out << buf;
    };
    for (std::size_t i = 0; i < d.times.size(); ++i) {
        put_first(d.times[i]);
        put(d.sup_vorticity[i], ',');
        put(d.b0_inf_inf[i], ',');
        put(d.b0_inf_1[i], ',');
        put(d.bkm_integral[i], ',');
        put(d.besov_morrey_v[i], ',');
        if (d.has_b()) {
            put(d.sup_current[i], ',');
            put(d.jb0_inf_inf[i], ',');
            put(d.jb0_inf_1[i], ',');
            put(d.besov_morrey_b[i], ',');
        }
        out << "\n";
    }
}

DiagnosticsSeries read_diagnostics_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail_io("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line)) fail_io("empty diagnostics file " + path.string());
    const bool with_b = line.find("sup_current") != std::string::npos;
    DiagnosticsSeries d;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        std::size_t expect = with_b ? 10 : 6;
        if (row.size() != expect) fail_io("malformed diagnostics row in " + path.string());
        d.times.push_back(row[0]);
        d.sup_vorticity.push_back(row[1]);
        d.b0_inf_inf.push_back(row[2]);
        d.b0_inf_1.push_back(row[3]);
        d.bkm_integral.push_back(row[4]);
        d.besov_morrey_v.push_back(row[5]);
        if (with_b) {
            d.sup_current.push_back(row[6]);
            d.jb0_inf_inf.push_back(row[7]);
            d.jb0_inf_1.push_back(row[8]);
            d.besov_morrey_b.push_back(row[9]);
        }
    }
    return d;
}

}  // namespace bmtk
