#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "logconv/grid.hpp"
#include "logconv/model.hpp"
#include "logconv/polytope.hpp"

/* File interchange: models as JSON (grid payloads in a little-endian float64
   sidecar), masks as run-length JSON, plus shared numeric formatting used by
   every text artifact the tools emit. */

namespace logconv::serialize {

using ordered_json = nlohmann::ordered_json;

/* %.17g round-trips doubles exactly and prints dyadic values short; printf
   formatting is locale-independent for 'g', so output is byte-stable. */
inline std::string fmt_real(Real v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

namespace detail {

inline ordered_json vec_to_json(const Vec& v) {
    ordered_json a = ordered_json::array();
    for (int i = 0; i < v.dim; ++i) a.push_back(v[i]);
    return a;
}

inline Vec vec_from_json(const ordered_json& a) {
    if (!a.is_array() || a.empty() || a.size() > 3)
        throw std::invalid_argument("serialize: point must be an array of 1..3 numbers");
    Vec v(static_cast<int>(a.size()));
    for (size_t i = 0; i < a.size(); ++i) v[static_cast<int>(i)] = a[i].get<Real>();
    return v;
}

inline std::string sidecar_name(const std::string& jsonPath) {
    size_t slash = jsonPath.find_last_of("/\\");
    size_t from = slash == std::string::npos ? 0 : slash + 1;
    size_t dot = jsonPath.find_last_of('.');
    std::string stem = (dot == std::string::npos || dot < from)
                           ? jsonPath.substr(from)
                           : jsonPath.substr(from, dot - from);
    return stem + ".bin";
}

inline std::string dir_of(const std::string& path) {
    size_t slash = path.find_last_of("/\\");
    return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
}

inline void write_le_f64(std::ostream& os, const std::vector<Real>& v) {
    for (Real x : v) {
        uint64_t bits = std::bit_cast<uint64_t>(x);
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
        os.write(reinterpret_cast<const char*>(b), 8);
    }
}

/* Geometry triple (origin, spacing, shape arrays of equal length) parsed
   through the validating constructor. */
inline GridGeom geom_from_json(const ordered_json& j) {
    Vec org = vec_from_json(j.at("origin"));
    const int d = org.dim;
    const auto& spacing = j.at("spacing");
    const auto& shape = j.at("shape");
    if (static_cast<int>(spacing.size()) != d || static_cast<int>(shape.size()) != d)
        throw std::invalid_argument("serialize: origin, spacing, shape lengths differ");
    std::array<Real, 3> sp{1.0, 1.0, 1.0};
    std::array<long, 3> sh{1, 1, 1};
    for (int i = 0; i < d; ++i) {
        sp[static_cast<size_t>(i)] = spacing[static_cast<size_t>(i)].get<Real>();
        sh[static_cast<size_t>(i)] = shape[static_cast<size_t>(i)].get<long>();
    }
    return GridGeom(d, org, sp, sh);
}

inline std::vector<Real> read_le_f64(std::istream& is, size_t count) {
    std::vector<Real> v(count);
    for (size_t k = 0; k < count; ++k) {
        unsigned char b[8];
        if (!is.read(reinterpret_cast<char*>(b), 8))
            throw std::runtime_error("serialize: sidecar truncated");
        uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(b[i]) << (8 * i);
        v[k] = std::bit_cast<Real>(bits);
    }
    return v;
}

} // namespace detail

/* Model -> JSON.  Grid variants reference a sidecar binary (row-major
   little-endian float64 of the linear function values); gridRef names that
   file inside the document. */
inline ordered_json model_to_json(const LogConcaveModel& m, const std::string& gridRef = "grid.bin") {
    ordered_json j;
    if (const auto* v = std::get_if<IndicatorModel>(&m.value)) {
        j["variant"] = "indicator";
        j["scale"] = v->scale;
        ordered_json verts = ordered_json::array();
        for (const Vec& p : v->body.vertices()) verts.push_back(detail::vec_to_json(p));
        j["vertices"] = verts;
    } else if (const auto* v = std::get_if<ExpConeModel>(&m.value)) {
        j["variant"] = "exp_cone";
        j["scale"] = v->scale;
        j["slope"] = detail::vec_to_json(v->slope);
        j["apex"] = detail::vec_to_json(v->apex);
        ordered_json ns = ordered_json::array();
        for (const Vec& n : v->coneNormals) ns.push_back(detail::vec_to_json(n));
        j["cone_normals"] = ns;
    } else if (const auto* v = std::get_if<GaussianModel>(&m.value)) {
        j["variant"] = "gaussian";
        j["scale"] = v->scale;
        j["mean"] = detail::vec_to_json(v->mean);
        ordered_json cov = ordered_json::array();
        for (int r = 0; r < v->cov.dim; ++r) {
            ordered_json row = ordered_json::array();
            for (int c = 0; c < v->cov.dim; ++c) row.push_back(v->cov.a[r][c]);
            cov.push_back(row);
        }
        j["cov"] = cov;
    } else {
        const auto& g = std::get<GridModel>(m.value).grid;
        j["variant"] = "grid";
        j["data"] = gridRef;
        ordered_json origin = ordered_json::array(), spacing = ordered_json::array(),
                     shape = ordered_json::array();
        for (int i = 0; i < g.geom.dim; ++i) {
            origin.push_back(g.geom.origin[i]);
            spacing.push_back(g.geom.spacing[i]);
            shape.push_back(g.geom.shape[i]);
        }
        j["origin"] = origin;
        j["spacing"] = spacing;
        j["shape"] = shape;
    }
    return j;
}

/* JSON -> model.  loadBlob maps a sidecar reference to its float64 payload;
   indicator bodies accept either a vertex list or halfspace rows
   [n_1..n_d, offset]. */
inline LogConcaveModel model_from_json(
    const ordered_json& j,
    const std::function<std::vector<Real>(const std::string&)>& loadBlob = {}) {
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "indicator") {
        Real scale = j.value("scale", 1.0);
        if (j.contains("vertices")) {
            std::vector<Vec> pts;
            for (const auto& row : j.at("vertices")) pts.push_back(detail::vec_from_json(row));
            if (pts.empty()) throw std::invalid_argument("serialize: indicator needs vertices");
            int dim = pts.front().dim;
            return make_indicator(Polytope::from_points(dim, pts), scale);
        }
        std::vector<Halfspace> hs;
        int dim = 0;
        for (const auto& row : j.at("halfspaces")) {
            if (!row.is_array() || row.size() < 2 || row.size() > 4)
                throw std::invalid_argument("serialize: halfspace row must be [n..., offset]");
            dim = static_cast<int>(row.size()) - 1;
            Vec n(dim);
            for (int i = 0; i < dim; ++i) n[i] = row[static_cast<size_t>(i)].get<Real>();
            hs.push_back(Halfspace{n, row[row.size() - 1].get<Real>()});
        }
        return make_indicator(Polytope::from_halfspaces(dim, hs), scale);
    }
    if (variant == "exp_cone") {
        std::vector<Vec> normals;
        for (const auto& row : j.at("cone_normals")) normals.push_back(detail::vec_from_json(row));
        return make_exp_cone(j.value("scale", 1.0), detail::vec_from_json(j.at("slope")),
                             detail::vec_from_json(j.at("apex")), normals);
    }
    if (variant == "gaussian") {
        Vec mean = detail::vec_from_json(j.at("mean"));
        SymMat cov;
        cov.dim = mean.dim;
        const auto& rows = j.at("cov");
        if (static_cast<int>(rows.size()) != cov.dim)
            throw std::invalid_argument("serialize: cov must be dim x dim");
        for (int r = 0; r < cov.dim; ++r)
            for (int c = 0; c < cov.dim; ++c) cov.a[r][c] = rows[static_cast<size_t>(r)][static_cast<size_t>(c)].get<Real>();
        return make_gaussian(mean, cov, j.value("scale", 1.0));
    }
    if (variant == "grid") {
        if (!loadBlob) throw std::invalid_argument("serialize: grid model needs a sidecar loader");
        GridGeom geom = detail::geom_from_json(j);
        std::vector<Real> lin = loadBlob(j.at("data").get<std::string>());
        if (static_cast<long>(lin.size()) != geom.size())
            throw std::invalid_argument("serialize: sidecar length does not match shape");
        std::vector<Real> logv(lin.size());
        for (size_t i = 0; i < lin.size(); ++i) {
            if (lin[i] < 0.0) throw std::invalid_argument("serialize: grid values must be >= 0");
            logv[i] = lin[i] > 0.0 ? std::log(lin[i]) : kNegInf;
        }
        return make_grid_model(GridFunction(geom, std::move(logv)));
    }
    throw std::invalid_argument("serialize: unknown variant '" + variant + "'");
}

/* Save/load a model document; grid payloads land in <stem>.bin next to the
   JSON file. */
inline void save_model(const LogConcaveModel& m, const std::string& jsonPath) {
    std::string ref = detail::sidecar_name(jsonPath);
    ordered_json j = model_to_json(m, ref);
    if (const auto* v = std::get_if<GridModel>(&m.value)) {
        std::ofstream bin(detail::dir_of(jsonPath) + ref, std::ios::binary);
        if (!bin) throw std::runtime_error("serialize: cannot write sidecar for " + jsonPath);
        std::vector<Real> lin(v->grid.logv.size());
        for (size_t i = 0; i < lin.size(); ++i)
            lin[i] = v->grid.logv[i] == kNegInf ? 0.0 : std::exp(v->grid.logv[i]);
        detail::write_le_f64(bin, lin);
    }
    std::ofstream os(jsonPath);
    if (!os) throw std::runtime_error("serialize: cannot write " + jsonPath);
    os << j.dump(2) << "\n";
}

inline LogConcaveModel load_model(const std::string& jsonPath) {
    std::ifstream is(jsonPath);
    if (!is) throw std::runtime_error("serialize: cannot read " + jsonPath);
    ordered_json j = ordered_json::parse(is);
    auto loader = [&](const std::string& ref) {
        std::ifstream bin(detail::dir_of(jsonPath) + ref, std::ios::binary);
        if (!bin) throw std::runtime_error("serialize: cannot read sidecar " + ref);
        bin.seekg(0, std::ios::end);
        auto bytes = static_cast<size_t>(bin.tellg());
        bin.seekg(0);
        if (bytes % 8 != 0) throw std::runtime_error("serialize: sidecar size not a multiple of 8");
        return detail::read_le_f64(bin, bytes / 8);
    };
    return model_from_json(j, loader);
}

/* Mask -> run-length JSON over flat (row-major) order. */
inline ordered_json mask_to_rle_json(const Mask& m) {
    ordered_json j;
    ordered_json origin = ordered_json::array(), spacing = ordered_json::array(),
                 shape = ordered_json::array();
    for (int i = 0; i < m.geom.dim; ++i) {
        origin.push_back(m.geom.origin[i]);
        spacing.push_back(m.geom.spacing[i]);
        shape.push_back(m.geom.shape[i]);
    }
    j["origin"] = origin;
    j["spacing"] = spacing;
    j["shape"] = shape;
    ordered_json runs = ordered_json::array();
    long n = m.geom.size();
    for (long i = 0; i < n;) {
        if (!m.on[static_cast<size_t>(i)]) {
            ++i;
            continue;
        }
        long start = i;
        while (i < n && m.on[static_cast<size_t>(i)]) ++i;
        runs.push_back(ordered_json::array({start, i - start}));
    }
    j["runs"] = runs;
    return j;
}

inline Mask mask_from_rle_json(const ordered_json& j) {
    GridGeom geom = detail::geom_from_json(j);
    Mask m(geom);
    long n = geom.size();
    for (const auto& run : j.at("runs")) {
        long start = run.at(0).get<long>(), len = run.at(1).get<long>();
        if (start < 0 || len < 0 || start + len > n)
            throw std::invalid_argument("serialize: run out of range");
        for (long i = start; i < start + len; ++i) m.on[static_cast<size_t>(i)] = true;
    }
    return m;
}

} // namespace logconv::serialize
