#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "logconv/vec.hpp"

namespace logconv {

/* Uniform point lattice in dimension 1 or 2: node (i0,..,i_{d-1}) sits at
   origin + i*spacing per axis.  Values attached to a lattice are midpoint
   samples; a node owns the cell of size prod(spacing) centered on it. */
struct GridGeom {
    int dim = 0;
    Vec origin;               // coordinates of node (0,..,0)
    std::array<Real, 3> spacing{0, 0, 0};
    std::array<long, 3> shape{1, 1, 1};

    GridGeom() = default;
    GridGeom(int d, Vec org, std::array<Real, 3> sp, std::array<long, 3> sh)
        : dim(d), origin(org), spacing(sp), shape(sh) {
        if (d < 1 || d > 2) throw std::invalid_argument("GridGeom: dim must be 1 or 2");
        for (int i = 0; i < d; ++i) {
            if (!(spacing[i] > 0.0)) throw std::invalid_argument("GridGeom: spacing must be positive");
            if (shape[i] < 1) throw std::invalid_argument("GridGeom: shape must be >= 1");
        }
    }

    long size() const {
        long n = 1;
        for (int i = 0; i < dim; ++i) n *= shape[i];
        return n;
    }
    Real cell_volume() const {
        Real v = 1.0;
        for (int i = 0; i < dim; ++i) v *= spacing[i];
        return v;
    }
    /* Row-major: last axis fastest. */
    long flat(const std::array<long, 3>& idx) const {
        long f = 0;
        for (int i = 0; i < dim; ++i) f = f * shape[i] + idx[i];
        return f;
    }
    std::array<long, 3> unflat(long f) const {
        std::array<long, 3> idx{0, 0, 0};
        for (int i = dim - 1; i >= 0; --i) {
            idx[i] = f % shape[i];
            f /= shape[i];
        }
        return idx;
    }
    Vec point(const std::array<long, 3>& idx) const {
        Vec p(dim);
        for (int i = 0; i < dim; ++i) p[i] = origin[i] + spacing[i] * static_cast<Real>(idx[i]);
        return p;
    }
    Vec point(long f) const { return point(unflat(f)); }
    bool in_range(const std::array<long, 3>& idx) const {
        for (int i = 0; i < dim; ++i)
            if (idx[i] < 0 || idx[i] >= shape[i]) return false;
        return true;
    }
    /* Nearest node index of a point; may fall outside the range. */
    std::array<long, 3> nearest(const Vec& p) const {
        std::array<long, 3> idx{0, 0, 0};
        for (int i = 0; i < dim; ++i)
            idx[i] = std::lround((p[i] - origin[i]) / spacing[i]);
        return idx;
    }
    bool same_spacing(const GridGeom& o, Real tol = 1e-9) const {
        if (dim != o.dim) return false;
        for (int i = 0; i < dim; ++i)
            if (std::abs(spacing[i] - o.spacing[i]) > tol * spacing[i]) return false;
        return true;
    }
};

/* Node subset of a lattice. */
struct Mask {
    GridGeom geom;
    std::vector<uint8_t> on;

    Mask() = default;
    explicit Mask(GridGeom g) : geom(g), on(static_cast<size_t>(g.size()), 0) {}

    long count() const {
        long c = 0;
        for (uint8_t b : on) c += b;
        return c;
    }
    /* Cell-count measure. */
    Real volume() const { return static_cast<Real>(count()) * geom.cell_volume(); }
    bool at(const std::array<long, 3>& idx) const {
        return geom.in_range(idx) && on[static_cast<size_t>(geom.flat(idx))] != 0;
    }
    std::vector<Vec> points() const {
        std::vector<Vec> pts;
        for (long f = 0; f < geom.size(); ++f)
            if (on[static_cast<size_t>(f)]) pts.push_back(geom.point(f));
        return pts;
    }
    bool empty() const { return count() == 0; }
};

/* Chebyshev dilation by r nodes; the standard one-cell inclusion tolerance. */
inline Mask dilate(const Mask& m, int r = 1) {
    Mask out(m.geom);
    const long n0 = m.geom.shape[0];
    const long n1 = (m.geom.dim == 2) ? m.geom.shape[1] : 1;
    for (long i = 0; i < n0; ++i)
        for (long j = 0; j < n1; ++j) {
            bool hit = false;
            for (long di = -r; di <= r && !hit; ++di)
                for (long dj = -r; dj <= r && !hit; ++dj) {
                    long ii = i + di, jj = j + dj;
                    if (ii < 0 || ii >= n0 || jj < 0 || jj >= n1) continue;
                    if (m.on[static_cast<size_t>(ii * n1 + jj)]) hit = true;
                }
            if (hit) out.on[static_cast<size_t>(i * n1 + j)] = 1;
        }
    return out;
}

/* Does the mask contain a node within Chebyshev distance slackCells of the
   node nearest to p?  Used for point-in-mask tests with one-cell tolerance. */
inline bool mask_near(const Mask& m, const Vec& p, int slackCells) {
    auto idx = m.geom.nearest(p);
    for (long di = -slackCells; di <= slackCells; ++di)
        for (long dj = -slackCells; dj <= slackCells; ++dj) {
            std::array<long, 3> q{idx[0] + di, m.geom.dim == 2 ? idx[1] + dj : 0, 0};
            if (m.geom.dim == 1 && dj != 0) continue;
            if (m.at(q)) return true;
        }
    return false;
}

/* Log-domain midpoint grid samples of a nonnegative function.  Cells outside
   the support hold -inf.  Integral and norms are exp-domain. */
struct GridFunction {
    GridGeom geom;
    std::vector<Real> logv;

    GridFunction() = default;
    GridFunction(GridGeom g, std::vector<Real> lv) : geom(g), logv(std::move(lv)) {
        if (static_cast<long>(logv.size()) != geom.size())
            throw std::invalid_argument("GridFunction: value count does not match shape");
        bool finite = false;
        for (Real v : logv) {
            if (v > kNegInf && !std::isfinite(v)) throw std::invalid_argument("GridFunction: log-values must be finite or -inf");
            finite = finite || v > kNegInf;
        }
        if (!finite) throw std::invalid_argument("GridFunction: empty support");
    }

    Real log_at(const std::array<long, 3>& idx) const {
        return geom.in_range(idx) ? logv[static_cast<size_t>(geom.flat(idx))] : kNegInf;
    }
    Real sup_log() const {
        Real m = kNegInf;
        for (Real v : logv) m = std::max(m, v);
        return m;
    }
    Real sup() const { return std::exp(sup_log()); }

    Real integral() const {
        Real s = 0.0;
        for (Real v : logv)
            if (v > kNegInf) s += std::exp(v);
        return s * geom.cell_volume();
    }

    Mask support() const {
        Mask m(geom);
        for (size_t i = 0; i < logv.size(); ++i) m.on[i] = logv[i] > kNegInf ? 1 : 0;
        return m;
    }

    /* Argmax node, lexicographically smallest index on ties. */
    long argmax_flat() const {
        long best = 0;
        for (long f = 1; f < geom.size(); ++f)
            if (logv[static_cast<size_t>(f)] > logv[static_cast<size_t>(best)]) best = f;
        return best;
    }
};

/* Mirror through the origin: (reflect f)(x) = f(-x), exact on the lattice. */
inline GridFunction reflect(const GridFunction& f) {
    GridGeom g = f.geom;
    for (int i = 0; i < g.dim; ++i)
        g.origin[i] = -(f.geom.origin[i] + f.geom.spacing[i] * static_cast<Real>(f.geom.shape[i] - 1));
    std::vector<Real> lv(f.logv.size());
    for (long fidx = 0; fidx < g.size(); ++fidx) {
        auto idx = g.unflat(fidx);
        std::array<long, 3> src{0, 0, 0};
        for (int i = 0; i < g.dim; ++i) src[i] = f.geom.shape[i] - 1 - idx[i];
        lv[static_cast<size_t>(fidx)] = f.logv[static_cast<size_t>(f.geom.flat(src))];
    }
    return GridFunction(g, std::move(lv));
}

/* Level-set mask {f >= t} (absolute threshold, exp domain).  A threshold
   above the sup yields an empty mask, which is a value, not an error. */
inline Mask level_set(const GridFunction& f, Real t) {
    if (!(t > 0.0)) throw std::invalid_argument("level_set: threshold must be positive");
    Real lt = std::log(t) - 1e-9;
    Mask m(f.geom);
    for (size_t i = 0; i < f.logv.size(); ++i) m.on[i] = f.logv[i] >= lt ? 1 : 0;
    return m;
}

/* Pointwise sqrt(f(x)*g(x)) on the overlap region; lattices must align. */
inline GridFunction pointwise_geomean(const GridFunction& f, const GridFunction& g) {
    if (!f.geom.same_spacing(g.geom)) throw std::invalid_argument("pointwise_geomean: spacing mismatch");
    std::array<long, 3> shift{0, 0, 0};
    for (int i = 0; i < f.geom.dim; ++i) {
        Real sh = (g.geom.origin[i] - f.geom.origin[i]) / f.geom.spacing[i];
        shift[i] = std::lround(sh);
        if (std::abs(sh - static_cast<Real>(shift[i])) > 1e-6)
            throw std::invalid_argument("pointwise_geomean: lattices not aligned");
    }
    std::array<long, 3> lo{0, 0, 0}, hi{1, 1, 1};
    for (int i = 0; i < f.geom.dim; ++i) {
        lo[i] = std::max(0L, shift[i]);
        hi[i] = std::min(f.geom.shape[i], g.geom.shape[i] + shift[i]);
        if (lo[i] >= hi[i]) throw std::invalid_argument("pointwise_geomean: disjoint lattices");
    }
    GridGeom out = f.geom;
    Vec org(f.geom.dim);
    for (int i = 0; i < f.geom.dim; ++i) {
        org[i] = f.geom.origin[i] + f.geom.spacing[i] * static_cast<Real>(lo[i]);
        out.shape[i] = hi[i] - lo[i];
    }
    out.origin = org;
    std::vector<Real> lv(static_cast<size_t>(out.size()), kNegInf);
    bool any = false;
    for (long fo = 0; fo < out.size(); ++fo) {
        auto idx = out.unflat(fo);
        std::array<long, 3> fi{0, 0, 0}, gi{0, 0, 0};
        for (int i = 0; i < out.dim; ++i) {
            fi[i] = idx[i] + lo[i];
            gi[i] = idx[i] + lo[i] - shift[i];
        }
        Real a = f.log_at(fi), b = g.log_at(gi);
        if (a > kNegInf && b > kNegInf) {
            lv[static_cast<size_t>(fo)] = 0.5 * (a + b);
            any = true;
        }
    }
    if (!any) throw std::invalid_argument("pointwise_geomean: product has empty support");
    return GridFunction(out, std::move(lv));
}

/* Midpoint log-concavity test over axis-aligned and diagonal node triples:
   2*lf((i+j)/2) >= lf(i)+lf(j) - tol whenever i+j is even per axis.  All even
   separations are tested, not only adjacent triples, so a -inf gap between
   finite samples is caught. */
inline bool is_log_concave_midpoint(const GridFunction& f, Real tol = 1e-9) {
    const long n0 = f.geom.shape[0];
    const long n1 = f.geom.dim == 2 ? f.geom.shape[1] : 1;
    auto lv = [&](long i, long j) { return f.logv[static_cast<size_t>(i * n1 + j)]; };
    const std::array<std::pair<long, long>, 4> dirs{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
    for (long i = 0; i < n0; ++i)
        for (long j = 0; j < n1; ++j)
            for (auto [di, dj] : dirs) {
                if (f.geom.dim == 1 && dj != 0) continue;
                for (long s = 1;; ++s) {
                    long i2 = i + 2 * s * di, j2 = j + 2 * s * dj;
                    if (i2 < 0 || i2 >= n0 || j2 < 0 || j2 >= n1) break;
                    Real a = lv(i, j), b = lv(i2, j2), m = lv(i + s * di, j + s * dj);
                    if (a > kNegInf && b > kNegInf && 2.0 * m < a + b - tol) return false;
                }
            }
    return true;
}

/* Support must be the rasterization of its own convex hull, up to one cell.
   Checked along rows/columns: the on-nodes of each line form one run. */
inline bool is_support_grid_convex(const GridFunction& f) {
    const long n0 = f.geom.shape[0];
    const long n1 = f.geom.dim == 2 ? f.geom.shape[1] : 1;
    auto onAt = [&](long i, long j) { return f.logv[static_cast<size_t>(i * n1 + j)] > kNegInf; };
    auto oneRun = [](const std::vector<uint8_t>& line) {
        int rises = line.empty() ? 0 : (line[0] ? 1 : 0);
        for (size_t i = 1; i < line.size(); ++i)
            if (line[i] && !line[i - 1]) ++rises;
        return rises <= 1;
    };
    for (long j = 0; j < n1; ++j) {
        std::vector<uint8_t> line;
        line.reserve(static_cast<size_t>(n0));
        for (long i = 0; i < n0; ++i) line.push_back(onAt(i, j) ? 1 : 0);
        if (!oneRun(line)) return false;
    }
    if (f.geom.dim == 2)
        for (long i = 0; i < n0; ++i) {
            std::vector<uint8_t> line;
            line.reserve(static_cast<size_t>(n1));
            for (long j = 0; j < n1; ++j) line.push_back(onAt(i, j) ? 1 : 0);
            if (!oneRun(line)) return false;
        }
    return true;
}

} // namespace logconv
