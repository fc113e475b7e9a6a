#include "bmtk.h"

#include <cstring>

#include "experiment.hpp"
#include "field_io.hpp"
#include "spectral_ops.hpp"

using namespace bmtk;

struct bmtk_field {
    RealField f;
};
struct bmtk_vfield {
    VectorField v;
};

namespace {

thread_local std::string g_last_error;

bmtk_status to_status(const Error& e) {
    switch (e.code()) {
        case ErrorCode::invalid_argument: return BMTK_ERR_INVALID_ARGUMENT;
        case ErrorCode::precondition: return BMTK_ERR_PRECONDITION;
        case ErrorCode::io: return BMTK_ERR_IO;
        case ErrorCode::cfl: return BMTK_ERR_CFL;
        case ErrorCode::assertion: return BMTK_ERR_ASSERTION;
        default: return BMTK_ERR_INTERNAL;
    }
}

template <typename Fn>
bmtk_status guarded(Fn&& fn) {
    try {
        fn();
        return BMTK_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return to_status(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BMTK_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return BMTK_ERR_INTERNAL;
    }
}

bmtk_status require(bool cond, const char* msg) {
    if (cond) return BMTK_OK;
    g_last_error = msg;
    return BMTK_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* bmtk_version(void) { return "0.1.0"; }

const char* bmtk_last_error(void) { return g_last_error.c_str(); }

bmtk_status bmtk_field_create(int dim, int size, double length, bmtk_field** out) {
    if (auto s = require(out != nullptr, "null output handle")) return s;
    return guarded([&] { *out = new bmtk_field{RealField(Grid(dim, size, length))}; });
}

bmtk_status bmtk_field_clone(const bmtk_field* f, bmtk_field** out) {
    if (auto s = require(f && out, "null handle")) return s;
    return guarded([&] { *out = new bmtk_field{f->f}; });
}

void bmtk_field_free(bmtk_field* f) { delete f; }

bmtk_status bmtk_field_info(const bmtk_field* f, int* dim, int* size, double* length) {
    if (auto s = require(f != nullptr, "null handle")) return s;
    if (dim) *dim = f->f.grid().dim;
    if (size) *size = f->f.grid().size;
    if (length) *length = f->f.grid().length;
    return BMTK_OK;
}

bmtk_status bmtk_field_data(bmtk_field* f, double** data, size_t* count) {
    if (auto s = require(f && data, "null handle")) return s;
    *data = f->f.data();
    if (count) *count = f->f.size();
    return BMTK_OK;
}

bmtk_status bmtk_field_write(const bmtk_field* f, const char* header_path) {
    if (auto s = require(f && header_path, "null handle or path")) return s;
    return guarded([&] { write_field(f->f, header_path); });
}

bmtk_status bmtk_field_read(const char* header_path, bmtk_field** out) {
    if (auto s = require(header_path && out, "null handle or path")) return s;
    return guarded([&] { *out = new bmtk_field{read_field(header_path)}; });
}

bmtk_status bmtk_field_derivative(const bmtk_field* f, int axis, int order, bmtk_field** out) {
    if (auto s = require(f && out, "null handle")) return s;
    return guarded([&] { *out = new bmtk_field{spectral_derivative(f->f, axis, order)}; });
}

bmtk_status bmtk_field_dealias(const bmtk_field* f, bmtk_field** out) {
    if (auto s = require(f && out, "null handle")) return s;
    return guarded([&] { *out = new bmtk_field{dealias(f->f)}; });
}

bmtk_status bmtk_field_dyadic_block(const bmtk_field* f, int j, int homogeneous, bmtk_field** out) {
    if (auto s = require(f && out, "null handle")) return s;
    return guarded([&] { *out = new bmtk_field{dyadic_block(f->f, j, homogeneous != 0)}; });
}

bmtk_status bmtk_field_low_pass(const bmtk_field* f, int j, bmtk_field** out) {
    if (auto s = require(f && out, "null handle")) return s;
    return guarded([&] { *out = new bmtk_field{low_pass(f->f, j)}; });
}

bmtk_status bmtk_vfield_create(int dim, int size, double length, bmtk_vfield** out) {
    if (auto s = require(out != nullptr, "null output handle")) return s;
    return guarded([&] { *out = new bmtk_vfield{VectorField(Grid(dim, size, length))}; });
}

bmtk_status bmtk_vfield_from_components(const bmtk_field* const* comps, int n, bmtk_vfield** out) {
    if (auto s = require(comps && out && n > 0, "null or empty component list")) return s;
    return guarded([&] {
        std::vector<RealField> fields;
        for (int i = 0; i < n; ++i) {
            if (!comps[i]) fail_invalid("null component handle");
            fields.push_back(comps[i]->f);
        }
        *out = new bmtk_vfield{VectorField(std::move(fields))};
    });
}

bmtk_status bmtk_vfield_component(const bmtk_vfield* v, int d, bmtk_field** out) {
    if (auto s = require(v && out, "null handle")) return s;
    return guarded([&] {
        if (d < 0 || d >= v->v.dim()) fail_invalid("component index out of range");
        *out = new bmtk_field{v->v[d]};
    });
}

void bmtk_vfield_free(bmtk_vfield* v) { delete v; }

bmtk_status bmtk_vfield_leray_project(const bmtk_vfield* v, bmtk_vfield** out) {
    if (auto s = require(v && out, "null handle")) return s;
    return guarded([&] { *out = new bmtk_vfield{leray_project(v->v)}; });
}

bmtk_status bmtk_vfield_divergence_defect(const bmtk_vfield* v, double* out) {
    if (auto s = require(v && out, "null handle")) return s;
    return guarded([&] { *out = divergence_defect(v->v); });
}

bmtk_status bmtk_vfield_pressure_gradient(const bmtk_vfield* w, const bmtk_vfield* v,
                                          bmtk_vfield** out) {
    if (auto s = require(w && v && out, "null handle")) return s;
    return guarded([&] { *out = new bmtk_vfield{pressure_gradient(w->v, v->v)}; });
}

bmtk_status bmtk_morrey_norm(const bmtk_field* f, double p, double q, int stride, int kmax,
                             double* out) {
    if (auto s = require(f && out, "null handle")) return s;
    return guarded([&] {
        WindowSet ws{kmax, stride};
        *out = morrey_norm(f->f, MorreyParams{p, q}, ws);
    });
}

bmtk_status bmtk_besov_morrey_norm(const bmtk_field* f, double s, double p, double q, double r,
                                   int homogeneous, int stride, int kmax, double* out) {
    if (auto st = require(f && out, "null handle")) return st;
    return guarded([&] {
        WindowSet ws{kmax, stride};
        BMParams bp{s, {p, q}, r, homogeneous != 0};
        *out = besov_morrey_norm(f->f, bp, ws);
    });
}

bmtk_status bmtk_besov_infinity_norm(const bmtk_field* f, double s, double r, int homogeneous,
                                     double* out) {
    if (auto st = require(f && out, "null handle")) return st;
    return guarded([&] { *out = besov_infinity_norm(f->f, s, r, homogeneous != 0); });
}

bmtk_status bmtk_run_experiment(const char* config_json, int* exit_code, char** report_json_out) {
    if (auto s = require(config_json && exit_code, "null config or exit_code")) return s;
    return guarded([&] {
        ExperimentResult res = run_experiment_json(config_json);
        *exit_code = res.exit_code;
        g_last_error = res.message;
        if (report_json_out) {
            std::string doc = res.report.is_null() ? std::string("{}") : res.report.dump(2);
            *report_json_out = static_cast<char*>(std::malloc(doc.size() + 1));
            std::memcpy(*report_json_out, doc.c_str(), doc.size() + 1);
        }
    });
}

void bmtk_string_free(char* s) { std::free(s); }

}  // extern "C"
