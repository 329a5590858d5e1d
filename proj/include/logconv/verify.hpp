#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "logconv/convbody.hpp"
#include "logconv/grid.hpp"
#include "logconv/grid_ops.hpp"
#include "logconv/model.hpp"
#include "logconv/parallel.hpp"
#include "logconv/polytope.hpp"
#include "logconv/rng.hpp"
#include "logconv/serialize.hpp"
#include "logconv/vec.hpp"

/* Inequality evaluation: each check computes both sides of one displayed
   inequality on one instance and reports the ratio.  Bodies run on exact
   polytope arithmetic; functions run on grids unless the instance is an
   indicator pair, where the polytope route resolves equality cases to 1e-9. */

namespace logconv::verify {

/* ------------------------------------------------------------------ */
/* Configuration and report rows                                      */
/* ------------------------------------------------------------------ */

enum class Path { Auto, Grid, Exact };

struct VerifyConfig {
    long resolution = 128;
    int tSamples = 64;
    int thetaSamples = 64;
    uint64_t seed = 0;
    Real tolerance = 0.02;
    Real epsilonTail = 1e-6;
    Path path = Path::Auto;
};

struct InequalityReport {
    std::string name;
    Real lhs = 0.0;
    Real rhs = 0.0;
    Real ratio = 0.0;
    bool pass = false;
    Real errorEstimate = 0.0;
    long resolution = 0;
    uint64_t seed = 0;
};

struct InstanceReports {
    std::string name;
    std::string params;
    std::vector<InequalityReport> checks;
};

enum class Bound { Upper, Lower, Identity };

struct BoundSpec {
    Bound bound = Bound::Upper;
    Real absTol = 0.0; // Identity rows only
};

inline const BoundSpec& bound_of(const std::string& name) {
    static const std::map<std::string, BoundSpec> table = {
        {"rs_diff", {Bound::Upper, 0.0}},
        {"rs_two", {Bound::Upper, 0.0}},
        {"rs_union", {Bound::Upper, 0.0}},
        {"rs_union_two", {Bound::Upper, 0.0}},
        {"rs_surface", {Bound::Upper, 0.0}},
        {"bm", {Bound::Lower, 0.0}},
        {"rs_fun", {Bound::Upper, 0.0}},
        {"rs_self", {Bound::Upper, 0.0}},
        {"rs_surface_fun", {Bound::Upper, 0.0}},
        {"colesanti", {Bound::Upper, 0.0}},
        {"polar", {Bound::Upper, 0.0}},
        {"polar_middle", {Bound::Upper, 0.0}},
        {"polar_order", {Bound::Upper, 0.0}},
        {"combination", {Bound::Upper, 0.0}},
        {"scaling", {Bound::Upper, 0.0}},
        {"scaling_k", {Bound::Upper, 0.0}},
        {"half_translate", {Bound::Upper, 0.0}},
        {"sandwich", {Bound::Upper, 0.0}},
        {"mt_logconcave", {Bound::Upper, 0.0}},
        {"theta_integral", {Bound::Identity, 1e-6}},
    };
    auto it = table.find(name);
    if (it == table.end()) throw std::invalid_argument("unknown inequality: " + name);
    return it->second;
}

namespace vdetail {

inline Real c2n(int n) { return static_cast<Real>(binomial(2 * n, n)); }

/* Sets ratio and pass from the bound kind.  Degenerate sides are an error in
   the instance, not a failed check. */
inline void finish_report(InequalityReport& r, Real tol) {
    const BoundSpec& bs = bound_of(r.name);
    if (!std::isfinite(r.lhs) || !std::isfinite(r.rhs))
        throw std::domain_error(r.name + ": non-finite check sides");
    if (bs.bound == Bound::Identity) {
        if (r.rhs == 0.0) throw std::domain_error(r.name + ": zero reference value");
        r.ratio = r.lhs / r.rhs;
        r.pass = std::abs(r.lhs - r.rhs) <= bs.absTol;
        return;
    }
    if (!(r.rhs > 0.0)) throw std::domain_error(r.name + ": degenerate right-hand side");
    r.ratio = r.lhs / r.rhs;
    r.pass = bs.bound == Bound::Upper ? r.ratio <= 1.0 + tol : r.ratio >= 1.0 - tol;
}

/* Node lattice over bbox(K) + bbox(L); an even cell count keeps the center
   of a symmetric configuration on a node, so equality cases are hit. */
inline GridGeom x_lattice(const Polytope& K, const Polytope& L, long res) {
    if (res < 8) throw std::invalid_argument("x_lattice: resolution must be >= 8");
    const long r = res + (res & 1);
    const int d = K.dim();
    const Box bk = K.bbox(), bl = L.bbox();
    const Vec lo = bk.lo + bl.lo, hi = bk.hi + bl.hi;
    std::array<Real, 3> sp{1.0, 1.0, 1.0};
    std::array<long, 3> sh{1, 1, 1};
    for (int i = 0; i < d; ++i) {
        sp[static_cast<size_t>(i)] = (hi[i] - lo[i]) / static_cast<Real>(r);
        sh[static_cast<size_t>(i)] = r + 1;
    }
    return GridGeom(d, lo, sp, sh);
}

template <class Fn>
inline Real lattice_max(const GridGeom& g, Fn&& fn) {
    return parallel_chunk_reduce<Real>(
        g.size(), 0, kNegInf,
        [&](long lo, long hi) {
            Real m = kNegInf;
            for (long i = lo; i < hi; ++i) m = std::max(m, fn(g.point(i)));
            return m;
        },
        [](const Real& a, const Real& b) { return std::max(a, b); });
}

inline Real section_volume(const Polytope& K, const Polytope& Lr, const Vec& x) {
    Polytope S = intersect(K, Lr.translated(x));
    return S.is_empty() ? 0.0 : S.volume();
}

inline Real section_surface(const Polytope& K, const Polytope& Lr, const Vec& x) {
    Polytope S = intersect(K, Lr.translated(x));
    return S.full_dim() ? S.surface_area() : 0.0;
}

inline Real section_w1(const Polytope& K, const Polytope& Lr, const Vec& x) {
    Polytope S = intersect(K, Lr.translated(x));
    if (S.is_empty()) return 0.0;
    return quermass_w1_of_points(K.dim(), S.vertices());
}

/* ------------------------------------------------------------------ */
/* Rasterisation with a shared, snapped lattice                       */
/*                                                                    */
/* One spacing h serves both models; each raster box is re-centred on */
/* a multiple of h with half-extent h*(res/2+1), so the lattices of   */
/* both functions and their reflections land on one h-grid offset by  */
/* h/2, which pointwise operations require, and every box covers the  */
/* model's mass box with at least h/2 to spare.                       */
/* ------------------------------------------------------------------ */

inline Real common_step(const LogConcaveModel& fm, const LogConcaveModel& gm, long evenRes,
                        Real epsTail) {
    const int d = model_dim(fm);
    const Box bf = default_box(fm, epsTail), bg = default_box(gm, epsTail);
    Real h = 0.0;
    for (int i = 0; i < d; ++i) {
        h = std::max(h, bf.extent(i) / static_cast<Real>(evenRes));
        h = std::max(h, bg.extent(i) / static_cast<Real>(evenRes));
    }
    if (!(h > 0.0)) throw std::invalid_argument("raster: degenerate model box");
    return h;
}

inline GridFunction raster_snapped(const LogConcaveModel& m, Real h, long evenRes, Real epsTail) {
    const int d = model_dim(m);
    const Box b = default_box(m, epsTail);
    Vec lo(d), hi(d);
    const Real half = h * (static_cast<Real>(evenRes) / 2.0 + 1.0);
    for (int i = 0; i < d; ++i) {
        const Real c = std::round(0.5 * (b.lo[i] + b.hi[i]) / h) * h;
        lo[i] = c - half;
        hi[i] = c + half;
    }
    return rasterize(m, Box{lo, hi}, evenRes + 2, epsTail);
}

inline std::pair<GridFunction, GridFunction> raster_pair(const LogConcaveModel& fm,
                                                         const LogConcaveModel& gm, long res,
                                                         Real epsTail) {
    if (model_dim(fm) != model_dim(gm))
        throw std::invalid_argument("raster_pair: dimension mismatch");
    if (model_dim(fm) > 2) throw std::invalid_argument("raster_pair: grids support dimension 1..2");
    if (res < 8) throw std::invalid_argument("raster_pair: resolution must be >= 8");
    const long r = res + (res & 1);
    const Real h = common_step(fm, gm, r, epsTail);
    return {raster_snapped(fm, h, r, epsTail), raster_snapped(gm, h, r, epsTail)};
}

inline GridFunction raster_single(const LogConcaveModel& m, long res, Real epsTail) {
    if (model_dim(m) > 2) throw std::invalid_argument("raster: grids support dimension 1..2");
    if (res < 8) throw std::invalid_argument("raster: resolution must be >= 8");
    const long r = res + (res & 1);
    const Real h = common_step(m, m, r, epsTail);
    return raster_snapped(m, h, r, epsTail);
}

/* Bounding box of {f >= tau * sup f}, hulled with a coarse mass box so the
   raster coverage check holds for every model kind. Structure checks read
   no geometry below their working levels, so their rasters concentrate on
   this region instead of the much larger integral-accuracy tail box, which
   would starve small superlevel sets of cells. */
inline Box superlevel_hull_box(const LogConcaveModel& m, Real tau, Real epsGuard) {
    Box b = std::visit(
        [&](const auto& v) -> Box {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GaussianModel>) {
                const int d = v.mean.dim;
                const Real r = std::sqrt(2.0 * std::log(1.0 / tau));
                Box e{v.mean, v.mean};
                for (int i = 0; i < d; ++i) {
                    const Real w = r * std::sqrt(v.cov.a[i][i]);
                    e.lo[i] -= w;
                    e.hi[i] += w;
                }
                return e;
            } else if constexpr (std::is_same_v<T, GridModel>) {
                return default_box(m, epsGuard);
            } else {
                return exact_superlevel(m, tau).bbox();
            }
        },
        m.value);
    const Box guard = default_box(m, epsGuard);
    for (int i = 0; i < b.dim(); ++i) {
        b.lo[i] = std::min(b.lo[i], guard.lo[i]);
        b.hi[i] = std::max(b.hi[i], guard.hi[i]);
    }
    return b;
}

inline GridFunction structure_raster(const LogConcaveModel& m, long res, Real tau) {
    if (model_dim(m) > 2) throw std::invalid_argument("raster: grids support dimension 1..2");
    if (res < 8) throw std::invalid_argument("raster: resolution must be >= 8");
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("structure_raster: tau in (0,1)");
    const long r = res + (res & 1);
    const Real epsGuard = 0.25;
    const Box b = superlevel_hull_box(m, tau, epsGuard);
    const int d = model_dim(m);
    Real h = 0.0;
    for (int i = 0; i < d; ++i) h = std::max(h, b.extent(i) / static_cast<Real>(r));
    if (!(h > 0.0)) throw std::invalid_argument("structure_raster: degenerate model box");
    Vec lo(d), hi(d);
    const Real half = h * (static_cast<Real>(r) / 2.0 + 1.0);
    for (int i = 0; i < d; ++i) {
        const Real c = std::round(0.5 * (b.lo[i] + b.hi[i]) / h) * h;
        lo[i] = c - half;
        hi[i] = c + half;
    }
    return rasterize(m, Box{lo, hi}, r + 2, epsGuard);
}

struct ExactPair {
    Polytope K;
    Real sf = 1.0;
    Polytope L;
    Real sg = 1.0;
};

inline std::optional<ExactPair> indicator_pair(const LogConcaveModel& fm,
                                               const LogConcaveModel& gm) {
    const auto* a = std::get_if<IndicatorModel>(&fm.value);
    const auto* b = std::get_if<IndicatorModel>(&gm.value);
    if (!a || !b) return std::nullopt;
    if (!a->body.full_dim() || !b->body.full_dim()) return std::nullopt;
    return ExactPair{a->body, a->scale, b->body, b->scale};
}

/* True when some lattice cell carries mass of both functions; assumes the
   lattices share spacing and offset. */
inline bool product_support_nonempty(const GridFunction& a, const GridFunction& b) {
    for (long f = 0; f < a.geom.size(); ++f) {
        if (a.logv[static_cast<size_t>(f)] == kNegInf) continue;
        if (b.log_at(b.geom.nearest(a.geom.point(f))) > kNegInf) return true;
    }
    return false;
}

inline bool analytic_model(const LogConcaveModel& m) {
    return !std::holds_alternative<GridModel>(m.value);
}

inline bool flat_log(const LogConcaveModel& m) {
    return std::holds_alternative<IndicatorModel>(m.value);
}

/* Peak value of the model: the stored scale for closed forms, the lattice
   maximum for sampled grids. */
inline Real sup_of(const LogConcaveModel& m, const GridFunction& raster) {
    if (std::holds_alternative<GridModel>(m.value)) return raster.sup();
    return std::visit(
        [](const auto& v) -> Real {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GridModel>) return 0.0;
            else return v.scale;
        },
        m.value);
}

/* Maximum of a concave section by presampling plus golden-section polish;
   returns {value, argument}. Tolerates -inf tails from support boundaries:
   unimodality keeps the best presample within one stride of the true
   maximizer, so the bracket always contains it. */
template <class Phi>
std::pair<Real, Real> line_max(Phi&& phi, Real lo, Real hi) {
    if (!(hi >= lo)) return {kNegInf, 0.5 * (lo + hi)};
    constexpr int kPre = 33;
    Real best = kNegInf, bx = 0.5 * (lo + hi);
    for (int i = 0; i < kPre; ++i) {
        const Real x = lo + (hi - lo) * (static_cast<Real>(i) / (kPre - 1));
        const Real v = phi(x);
        if (v > best) {
            best = v;
            bx = x;
        }
    }
    if (best == kNegInf) return {kNegInf, bx};
    const Real stride = (hi - lo) / (kPre - 1);
    Real a = std::max(lo, bx - stride);
    Real b = std::min(hi, bx + stride);
    constexpr Real kInvPhi = 0.6180339887498949;
    Real x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    Real f1 = phi(x1), f2 = phi(x2);
    for (int it = 0; it < 56; ++it) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = phi(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = phi(x2);
        }
        if (f1 > best) {
            best = f1;
            bx = x1;
        }
        if (f2 > best) {
            best = f2;
            bx = x2;
        }
    }
    return {best, bx};
}

/* Coordinatewise ascent for a concave function of two variables; every
   sweep line passes through the incumbent, so the value never decreases. */
template <class Phi2>
Real plane_max(Phi2&& phi, Real lox, Real hix, Real loy, Real hiy) {
    constexpr int kPre = 9;
    Real best = kNegInf;
    Real px = 0.5 * (lox + hix), py = 0.5 * (loy + hiy);
    for (int i = 0; i < kPre; ++i) {
        const Real x = lox + (hix - lox) * (static_cast<Real>(i) / (kPre - 1));
        for (int j = 0; j < kPre; ++j) {
            const Real y = loy + (hiy - loy) * (static_cast<Real>(j) / (kPre - 1));
            const Real v = phi(x, y);
            if (v > best) {
                best = v;
                px = x;
                py = y;
            }
        }
    }
    if (best == kNegInf) return kNegInf;
    for (int sweep = 0; sweep < 4; ++sweep) {
        const auto rx = line_max([&](Real x) { return phi(x, py); }, lox, hix);
        if (rx.first > best) best = rx.first;
        px = rx.second;
        const auto ry = line_max([&](Real y) { return phi(px, y); }, loy, hiy);
        if (ry.first > best) best = ry.first;
        py = ry.second;
    }
    return best;
}

/* Quadrature of exp(sup_x [log f(x) + log g(w - x)]) over the node-sum
   lattice, with the supremum taken over the continuum instead of over
   lattice offsets. Lattice maxima undershoot by O(spacing) when the
   maximizer sits on a support boundary (worst for exponential cones, where
   every node misses the apex by half a cell); per-node concave
   maximization restores midpoint-rule accuracy. `halved` integrates
   exp(s/2) against half-step cells, matching sup-convolution under the
   square-root convention. */
inline Real sup_conv_integral(const LogConcaveModel& fm, const LogConcaveModel& gm,
                              const GridGeom& geomF, const GridGeom& geomG, Real epsTail,
                              bool halved) {
    const GridGeom sum = griddetail::sum_geom(geomF, geomG);
    const int n = sum.dim;
    const Box bf = default_box(fm, epsTail);
    const Box bg = default_box(gm, epsTail);
    const Real cell = sum.cell_volume() * (halved ? std::pow(0.5, n) : 1.0);
    const Real total = parallel_chunk_reduce<Real>(
        sum.size(), 4096, 0.0,
        [&](long lo, long hi) {
            Real acc = 0.0;
            for (long fl = lo; fl < hi; ++fl) {
                const Vec w = sum.point(fl);
                Real lox[2], hix[2];
                bool empty = false;
                for (int i = 0; i < n; ++i) {
                    lox[i] = std::max(bf.lo[i], w[i] - bg.hi[i]);
                    hix[i] = std::min(bf.hi[i], w[i] - bg.lo[i]);
                    if (!(hix[i] >= lox[i])) empty = true;
                }
                if (empty) continue;
                Real s = kNegInf;
                if (n == 1) {
                    s = line_max(
                            [&](Real x) {
                                return log_evaluate(fm, Vec(1, x)) +
                                       log_evaluate(gm, Vec(1, w[0] - x));
                            },
                            lox[0], hix[0])
                            .first;
                } else {
                    s = plane_max(
                        [&](Real x, Real y) {
                            return log_evaluate(fm, Vec(2, x, y)) +
                                   log_evaluate(gm, Vec(2, w[0] - x, w[1] - y));
                        },
                        lox[0], hix[0], lox[1], hix[1]);
                }
                if (s > kNegInf) acc += std::exp(halved ? 0.5 * s : s);
            }
            return acc;
        },
        [](Real a, Real b) { return a + b; });
    return total * cell;
}

/* Midpoint quadrature of sqrt(f(x) g(-x)) with direct model evaluation. */
inline Real geomean_integral_exact(const LogConcaveModel& fm, const LogConcaveModel& gm,
                                   const GridGeom& geom) {
    const Real cell = geom.cell_volume();
    const Real total = parallel_chunk_reduce<Real>(
        geom.size(), 4096, 0.0,
        [&](long lo, long hi) {
            Real acc = 0.0;
            for (long fl = lo; fl < hi; ++fl) {
                const Vec x = geom.point(fl);
                const Real s = log_evaluate(fm, x) + log_evaluate(gm, -1.0 * x);
                if (s > kNegInf) acc += std::exp(0.5 * s);
            }
            return acc;
        },
        [](Real a, Real b) { return a + b; });
    return total * cell;
}

} // namespace vdetail

/* ------------------------------------------------------------------ */
/* Body inequalities (exact polytope arithmetic)                      */
/* ------------------------------------------------------------------ */

inline InequalityReport check_body(const std::string& name, const Polytope& K,
                                   const std::optional<Polytope>& Lin, const VerifyConfig& cfg) {
    if (!K.full_dim()) throw std::invalid_argument("check_body: K must be full-dimensional");
    const int n = K.dim();
    const Real c = vdetail::c2n(n);
    InequalityReport r;
    r.name = name;
    r.seed = cfg.seed;

    if (name == "rs_diff" || name == "rs_union") {
        if (Lin) throw std::invalid_argument(name + ": takes a single body");
    }

    if (name == "rs_diff") {
        r.lhs = minkowski_sum(K, K.reflected()).volume();
        r.rhs = c * K.volume();
    } else if (name == "rs_union") {
        if (!K.contains(Vec(n))) throw std::invalid_argument("rs_union: K must contain the origin");
        r.lhs = convex_hull_union(K, K.reflected()).volume();
        r.rhs = std::pow(2.0, n) * K.volume();
    } else if (name == "rs_union_two") {
        const Polytope L = Lin ? *Lin : K;
        if (!L.full_dim()) throw std::invalid_argument(name + ": L must be full-dimensional");
        if (!K.contains(Vec(n)) || !L.contains(Vec(n)))
            throw std::invalid_argument("rs_union_two: both bodies must contain the origin");
        r.lhs = intersect(K, L).volume() * convex_hull_union(K, L.reflected()).volume();
        r.rhs = std::pow(2.0, n) * K.volume() * L.volume();
    } else if (name == "bm") {
        const Polytope L = Lin ? *Lin : K;
        if (!L.full_dim()) throw std::invalid_argument(name + ": L must be full-dimensional");
        r.lhs = std::pow(minkowski_sum(K, L).volume(), 1.0 / n);
        r.rhs = std::pow(K.volume(), 1.0 / n) + std::pow(L.volume(), 1.0 / n);
    } else if (name == "rs_two" || name == "rs_surface") {
        if (n > 2)
            throw std::invalid_argument(name + ": translate search supported in dimension 1..2");
        const Polytope L = Lin ? *Lin : K.reflected();
        if (!L.full_dim()) throw std::invalid_argument(name + ": L must be full-dimensional");
        const Polytope Lr = L.reflected();
        const Real volSum = minkowski_sum(K, L).volume();
        const Real rhs = name == "rs_two"
                             ? c * K.volume() * L.volume()
                             : c * (K.volume() * L.surface_area() + L.volume() * K.surface_area());
        auto lhs_at = [&](long res) {
            const GridGeom g = vdetail::x_lattice(K, L, res);
            if (name == "rs_two") {
                const Real maxSec = vdetail::lattice_max(
                    g, [&](const Vec& x) { return vdetail::section_volume(K, Lr, x); });
                return maxSec * volSum;
            }
            const Real maxSurf = vdetail::lattice_max(
                g, [&](const Vec& x) { return vdetail::section_surface(K, Lr, x); });
            return volSum * 2.0 * maxSurf;
        };
        const long res = cfg.resolution + (cfg.resolution & 1);
        r.lhs = lhs_at(res);
        r.rhs = rhs;
        r.resolution = res;
        r.errorEstimate = std::abs(r.lhs / rhs - lhs_at(2 * res) / rhs);
    } else {
        throw std::invalid_argument("check_body: unknown inequality " + name);
    }
    vdetail::finish_report(r, 1e-9);
    return r;
}

/* ------------------------------------------------------------------ */
/* Functional inequalities                                            */
/* ------------------------------------------------------------------ */

inline InequalityReport check_function(const std::string& name, const LogConcaveModel& fm,
                                       const std::optional<LogConcaveModel>& gmIn,
                                       const VerifyConfig& cfg) {
    if (name != "rs_fun" && name != "rs_self" && name != "rs_surface_fun" && name != "colesanti")
        throw std::invalid_argument("check_function: unknown inequality " + name);
    const int n = model_dim(fm);
    if (name == "rs_self" && gmIn)
        throw std::invalid_argument("rs_self: pairs f with its own reflection, takes no g");
    if (name == "rs_surface_fun" && n != 2)
        throw std::invalid_argument("rs_surface_fun: supported in dimension 2 only");
    const LogConcaveModel gm = gmIn ? *gmIn : reflect(fm);
    if (model_dim(gm) != n) throw std::invalid_argument("check_function: dimension mismatch");

    const auto ep = vdetail::indicator_pair(fm, gm);
    bool exact = false;
    switch (cfg.path) {
        case Path::Auto:
            exact = ep.has_value() &&
                    (name == "rs_fun" || name == "rs_self" || name == "colesanti");
            break;
        case Path::Exact:
            if (!ep) throw std::invalid_argument("check_function: exact path needs indicators");
            exact = true;
            break;
        case Path::Grid:
            exact = false;
            break;
    }

    InequalityReport r;
    r.name = name;
    r.seed = cfg.seed;
    const Real c = vdetail::c2n(n);

    if (exact) {
        const Polytope& K = ep->K;
        const Polytope& L = ep->L;
        const Real sf = ep->sf, sg = ep->sg;
        const Real volK = K.volume(), volL = L.volume();
        if (name == "rs_self") {
            r.lhs = sf * sf * minkowski_sum(K, K.reflected()).volume();
            r.rhs = c * sf * (sf * volK);
        } else if (name == "colesanti") {
            const Real overlap = intersect(K, L.reflected()).volume();
            const Real volSum = minkowski_sum(K, L).volume();
            r.lhs = sf * sg * overlap * volSum / std::pow(2.0, n);
            r.rhs = std::pow(2.0, n) * (sf * volK) * (sg * volL);
        } else {
            if (n > 2)
                throw std::invalid_argument(name +
                                            ": translate search supported in dimension 1..2");
            const Polytope Lr = L.reflected();
            const Real volSum = minkowski_sum(K, L).volume();
            const long res = cfg.resolution + (cfg.resolution & 1);
            auto sides_at = [&](long rr) -> std::pair<Real, Real> {
                if (name == "rs_fun") {
                    const Real maxSec = vdetail::lattice_max(
                        vdetail::x_lattice(K, L, rr),
                        [&](const Vec& x) { return vdetail::section_volume(K, Lr, x); });
                    return {(sf * sg * maxSec) * (sf * sg * volSum),
                            c * sf * sg * (sf * volK) * (sg * volL)};
                }
                const Real maxW1 = vdetail::lattice_max(
                    vdetail::x_lattice(K, L, rr),
                    [&](const Vec& x) { return vdetail::section_w1(K, Lr, x); });
                if (!(maxW1 > 0.0))
                    throw std::domain_error("rs_surface_fun: all sections degenerate");
                const Real lhs = sf * sg * volSum;
                const Real rhs = c * sf * sg *
                                 ((sg * L.quermass_w1()) * (sf * volK) +
                                  (sf * K.quermass_w1()) * (sg * volL)) /
                                 (2.0 * sf * sg * maxW1);
                return {lhs, rhs};
            };
            auto [lhs0, rhs0] = sides_at(res);
            auto [lhs1, rhs1] = sides_at(2 * res);
            r.lhs = lhs0;
            r.rhs = rhs0;
            r.resolution = res;
            r.errorEstimate = std::abs(lhs0 / rhs0 - lhs1 / rhs1);
        }
        vdetail::finish_report(r, 1e-9);
        return r;
    }

    if (n > 2) throw std::invalid_argument("check_function: grids support dimension 1..2");
    /* Closed-form pairs get per-node continuum maximization for the
       sup-convolution quadratures; lattice-offset maxima lose O(spacing)
       at support boundaries. Flat pairs (both indicators) stay on lattice
       ops, where the offset maximum is already exact. Sampled grids carry
       no off-node information, so they stay on lattice ops too. */
    const bool refined = vdetail::analytic_model(fm) && vdetail::analytic_model(gm) &&
                         !(vdetail::flat_log(fm) && vdetail::flat_log(gm));
    auto sides_at = [&](long res) -> std::pair<Real, Real> {
        GridFunction F = [&] {
            if (name == "rs_self") return vdetail::raster_single(fm, res, cfg.epsilonTail);
            return vdetail::raster_pair(fm, gm, res, cfg.epsilonTail).first;
        }();
        GridFunction G = [&] {
            if (name == "rs_self") return reflect(F);
            return vdetail::raster_pair(fm, gm, res, cfg.epsilonTail).second;
        }();
        const Real supF = vdetail::sup_of(fm, F);
        const Real supG = vdetail::sup_of(gm, G);
        auto asplund_integral = [&] {
            if (refined)
                return vdetail::sup_conv_integral(fm, gm, F.geom, G.geom, cfg.epsilonTail, false);
            return asplund(F, G).integral();
        };
        if (name == "rs_fun") {
            const Real supConv = convolve(F, G).sup();
            return {supConv * asplund_integral(), c * supF * supG * F.integral() * G.integral()};
        }
        if (name == "rs_self") {
            return {asplund_integral(), c * supF * F.integral()};
        }
        if (name == "colesanti") {
            Real geoInt = 0.0;
            Real opInt = 0.0;
            if (refined) {
                geoInt = vdetail::geomean_integral_exact(fm, gm, F.geom);
                opInt = vdetail::sup_conv_integral(fm, gm, F.geom, G.geom, cfg.epsilonTail, true);
            } else {
                const GridFunction Gr = reflect(G);
                if (vdetail::product_support_nonempty(F, Gr))
                    geoInt = pointwise_geomean(F, Gr).integral();
                opInt = oplus(F, G).integral();
            }
            return {geoInt * opInt, std::pow(2.0, n) * F.integral() * G.integral()};
        }
        // rs_surface_fun
        const Real intAsp = asplund_integral();
        const Real maxW1 = max_w1_section(F, G, cfg.tSamples).value;
        if (!(maxW1 > 0.0)) throw std::domain_error("rs_surface_fun: all sections degenerate");
        const Real rhs = c * supF * supG *
                         (w1_function(G, cfg.tSamples) * F.integral() +
                          w1_function(F, cfg.tSamples) * G.integral()) /
                         (2.0 * maxW1);
        return {intAsp, rhs};
    };
    const long res = cfg.resolution + (cfg.resolution & 1);
    auto [lhs0, rhs0] = sides_at(res);
    auto [lhs1, rhs1] = sides_at(2 * res);
    r.lhs = lhs0;
    r.rhs = rhs0;
    r.resolution = res;
    r.errorEstimate = std::abs(lhs0 / rhs0 - lhs1 / rhs1);
    vdetail::finish_report(r, cfg.tolerance);
    return r;
}

/* ------------------------------------------------------------------ */
/* Structure checks on convolution and section sets                   */
/*                                                                    */
/* Inclusions are tested on hull generators of the discrete sets with */
/* a one-cell tolerance: a row's lhs is the worst ring distance in    */
/* cells from a predicted point to the target mask, and rhs is 1.     */
/* ------------------------------------------------------------------ */

inline const std::vector<std::string>& structure_lemma_names() {
    static const std::vector<std::string> names = {"combination",    "scaling",
                                                   "scaling_k",      "half_translate",
                                                   "sandwich",       "mt_logconcave"};
    return names;
}

struct StructureInstance {
    std::string name;
    LogConcaveModel model;
    std::vector<std::string> lemmas;
};

namespace vdetail {

inline int cell_distance(const Mask& m, const Vec& p) {
    for (int s = 0; s <= 4; ++s)
        if (mask_near(m, p, s)) return s;
    return 5;
}

/* Hull sample points of a mask, capped to keep inclusion tests cheap. */
inline std::vector<Vec> mask_generators(const Mask& m, size_t cap = 10) {
    std::vector<Vec> pts = mask_hull_points(m);
    if (pts.size() <= cap) return pts;
    std::vector<Vec> out;
    out.reserve(cap);
    for (size_t i = 0; i < cap; ++i)
        out.push_back(pts[i * (pts.size() - 1) / (cap - 1)]);
    return out;
}

/* Levels kept low enough that the superlevel sets span many cells even for
   models whose raster box is dominated by an integrable tail; the sandwich
   check also visits t^2. */
inline std::vector<Real> structure_t_levels() {
    std::vector<Real> t(4);
    for (int j = 0; j < 4; ++j) t[static_cast<size_t>(j)] = 0.05 + 0.5 * (j + 0.5) / 4.0;
    return t;
}

/* Nearest-cell distances mean nothing against a target of a handful of
   cells: a theta near 1 pinches the set to a width below what section
   counting can resolve (the threshold band (1-theta)*M_t falls under the
   section boundary noise). Sampled tuples whose target is smaller than
   this floor are dropped; they get checked whenever resolution suffices. */
inline long min_target_cells(int dim) { return dim == 1 ? 3 : 8; }

/* Overlap profile |A meet (x + A)| of a section mask with itself, queried
   at integer lattice shifts. Thresholding the profile at theta * |A| gives
   the discrete theta-convolution body of A with -A; counting cells keeps
   the measure convention of conv_set, so sandwich comparisons never mix
   hull areas with cell counts. Shifts are differences of two A-lattice
   nodes, so their coordinates land exactly on the convolution sets' sum
   lattice. Querying points beats materializing the whole body: the checks
   only ever visit a few hundred shifts. */
struct OverlapBody {
    const Mask* mask;
    std::vector<std::array<long, 3>> cells;
    int dim;
    std::array<Real, 3> spacing;
    long window;

    explicit OverlapBody(const Mask& A)
        : mask(&A), dim(A.geom.dim), spacing(A.geom.spacing), window(0) {
        for (long f = 0; f < A.geom.size(); ++f)
            if (A.on[static_cast<size_t>(f)]) cells.push_back(A.geom.unflat(f));
        if (cells.empty()) throw std::invalid_argument("overlap body: empty mask");
        for (int i = 0; i < dim; ++i) window = std::max(window, A.geom.shape[i]);
    }

    long count(const std::array<long, 3>& d) const {
        long c = 0;
        for (const auto& i : cells) {
            std::array<long, 3> j{0, 0, 0};
            for (int a = 0; a < dim; ++a) j[a] = i[a] - d[a];
            if (mask->at(j)) ++c;
        }
        return c;
    }

    Vec point(const std::array<long, 3>& d) const {
        Vec x(dim);
        for (int a = 0; a < dim; ++a) x[a] = static_cast<Real>(d[a]) * spacing[a];
        return x;
    }

    bool member(const std::array<long, 3>& d, Real thrCells) const {
        return static_cast<Real>(count(d)) >= thrCells - 1e-9;
    }

    /* Cell distance from x to the body, capped at 2: enough to separate
       "on it", "one cell off", and "violation". */
    int distance2(const Vec& x, Real thrCells) const {
        std::array<long, 3> d0{0, 0, 0};
        for (int a = 0; a < dim; ++a) d0[a] = std::lround(x[a] / spacing[a]);
        if (member(d0, thrCells)) return 0;
        const long b1 = dim == 2 ? 1 : 0;
        for (long a = -1; a <= 1; ++a)
            for (long b = -b1; b <= b1; ++b) {
                if (a == 0 && b == 0) continue;
                if (member({d0[0] + a, d0[1] + b, 0}, thrCells)) return 1;
            }
        return 2;
    }

    /* Boundary samples of {x : count(x) >= thr} by directional bisection
       from the origin shift, which always qualifies. The profile is
       unimodal up to cell noise, so bisection lands within a cell of the
       directional extreme; as with mask_generators this is a sample of the
       body's extent, not an exhaustive hull. */
    std::vector<Vec> boundary_points(Real thrCells, int dirs = 16) const {
        std::vector<Vec> out;
        std::vector<std::array<long, 3>> seen;
        auto emit = [&](const std::array<long, 3>& d) {
            for (const auto& s : seen)
                if (s == d) return;
            seen.push_back(d);
            out.push_back(point(d));
        };
        std::vector<std::array<Real, 2>> us;
        if (dim == 1) {
            us = {{1.0, 0.0}, {-1.0, 0.0}};
        } else {
            for (int a = 0; a < dirs; ++a) {
                const Real phi = 2.0 * M_PI * (static_cast<Real>(a) + 0.5) / dirs;
                us.push_back({std::cos(phi), std::sin(phi)});
            }
        }
        const Real sMax = 1.5 * static_cast<Real>(window) + 2.0;
        for (const auto& u : us) {
            Real lo = 0.0, hi = sMax;
            for (int it = 0; it < 14; ++it) {
                const Real mid = 0.5 * (lo + hi);
                const std::array<long, 3> d{std::lround(mid * u[0]),
                                            dim == 2 ? std::lround(mid * u[1]) : 0, 0};
                (member(d, thrCells) ? lo : hi) = mid;
            }
            emit({std::lround(lo * u[0]), dim == 2 ? std::lround(lo * u[1]) : 0, 0});
        }
        return out;
    }
};

} // namespace vdetail

inline InstanceReports check_structure(const StructureInstance& inst, const VerifyConfig& cfg) {
    const int n = model_dim(inst.model);
    InstanceReports out;
    out.name = inst.name;
    out.params = "structure on a log-concave model, dim " + std::to_string(n);

    const bool isGrid = std::holds_alternative<GridModel>(inst.model.value);
    const std::vector<Real> tList = vdetail::structure_t_levels();
    CounterRng rng{cfg.seed};

    std::optional<GridFunction> Fopt;
    std::optional<GridFunction> Gopt;
    auto raster = [&]() {
        if (!Fopt) {
            /* Deepest level any lemma reads is t^2 at the smallest t; halve
               it once more for a comfortable margin at the box boundary. */
            const Real tau = 0.5 * tList.front() * tList.front();
            Fopt = vdetail::structure_raster(inst.model, cfg.resolution, tau);
            Gopt = reflect(*Fopt);
        }
    };

    for (const std::string& lemma : inst.lemmas) {
        InequalityReport r;
        r.name = lemma;
        r.seed = cfg.seed;
        r.resolution = lemma == "mt_logconcave" ? 0 : cfg.resolution;

        if (lemma == "mt_logconcave") {
            if (isGrid)
                throw std::invalid_argument("mt_logconcave: needs an analytic superlevel model");
            const int S = std::max(8, cfg.tSamples / 4);
            const std::vector<Real> ts = log_t_grid(S, 1e-3);
            std::vector<Real> phi(ts.size());
            for (size_t i = 0; i < ts.size(); ++i)
                phi[i] = std::pow(exact_superlevel_volume(inst.model, std::sqrt(ts[i])),
                                  1.0 / n);
            Real worstCurv = 0.0;
            for (size_t i = 1; i + 1 < phi.size(); ++i)
                worstCurv = std::max(worstCurv, phi[i + 1] - 2.0 * phi[i] + phi[i - 1]);
            r.lhs = std::max(0.0, worstCurv);
            r.rhs = 1e-6;
            vdetail::finish_report(r, cfg.tolerance);
            out.checks.push_back(std::move(r));
            continue;
        }

        raster();
        const GridFunction& F = *Fopt;
        const GridFunction& G = *Gopt;
        if (lemma == "scaling_k" && n != 2)
            throw std::invalid_argument("scaling_k: needs a 2D model");
        int worst = 0;

        if (lemma == "combination") {
            std::vector<std::array<Real, 5>> tuples; // theta1, theta2, lambda1, lambda2, thetac
            std::vector<Real> thetas;
            for (uint64_t j = 0; j < 4; ++j) {
                const Real t1 = rng.uniform(j, 10, 0.05, 0.9);
                const Real t2 = rng.uniform(j, 11, 0.05, 0.9);
                Real l1 = rng.uniform(j, 12, 0.15, 0.6);
                Real l2 = rng.uniform(j, 13, 0.15, 0.6);
                if (l1 + l2 > 0.9) {
                    const Real s = 0.9 / (l1 + l2);
                    l1 *= s;
                    l2 *= s;
                }
                const Real root = 1.0 - l1 * (1.0 - std::pow(t1, 1.0 / n)) -
                                  l2 * (1.0 - std::pow(t2, 1.0 / n));
                const Real tc = std::pow(root, n);
                tuples.push_back({t1, t2, l1, l2, tc});
                thetas.push_back(t1);
                thetas.push_back(t2);
            }
            const ConvolutionSetFamily fam = conv_family(F, G, tList, thetas, n);
            /* Target thresholds get one cell of measure slack, one column
               per (level, tuple); see the scaling branch. */
            std::vector<Real> slacked;
            for (size_t ti = 0; ti < fam.tSamples.size(); ++ti)
                for (size_t j = 0; j < tuples.size(); ++j) {
                    const Real mt = fam.perT[ti].mt;
                    slacked.push_back(
                        mt > 0.0
                            ? std::max(0.0, tuples[j][4] - F.geom.cell_volume() / mt)
                            : tuples[j][4]);
                }
            const ConvolutionSetFamily tgt = conv_family(F, G, tList, slacked, n);
            for (size_t ti = 0; ti < fam.tSamples.size(); ++ti) {
                if (!(fam.perT[ti].mt > 0.0)) continue;
                const Vec x0 = fam.perT[ti].x0;
                for (size_t j = 0; j < tuples.size(); ++j) {
                    const Real l1 = tuples[j][2], l2 = tuples[j][3];
                    const Mask& A = fam.cSets[ti][2 * j];
                    const Mask& B = fam.cSets[ti][2 * j + 1];
                    const Mask& C = tgt.cSets[ti][tuples.size() * ti + j];
                    if (A.empty() || B.empty() ||
                        C.count() < vdetail::min_target_cells(n))
                        continue;
                    for (const Vec& p : vdetail::mask_generators(A))
                        for (const Vec& q : vdetail::mask_generators(B)) {
                            const Vec z = x0 + (p - x0) * l1 + (q - x0) * l2;
                            worst = std::max(worst, vdetail::cell_distance(C, z));
                        }
                }
            }
        } else if (lemma == "scaling" || lemma == "scaling_k") {
            const int k = lemma == "scaling" ? n : n - 1;
            /* One measure unit: cell counting resolves thresholds to a
               single cell (k = n); hull mean width carries the usual 4h
               budget of grid W1 computations (k = n - 1). The target gets
               that much slack while the source stays strict. */
            const Real unit =
                k == n ? F.geom.cell_volume() : 4.0 * F.geom.spacing[0];
            std::vector<std::array<Real, 2>> pairs;
            std::vector<Real> thetas;
            for (uint64_t j = 0; j < 4; ++j) {
                const Real t0 = rng.uniform(j, 20, 0.05, 0.5);
                const Real t1 = t0 + 0.05 + rng.uniform(j, 21) * (0.9 - t0 - 0.05);
                pairs.push_back({t0, t1});
                thetas.push_back(t0);
            }
            const ConvolutionSetFamily fam = conv_family(F, G, tList, thetas, k);
            /* One slacked target column per (level, pair), all in one pass. */
            std::vector<Real> slacked;
            for (size_t ti = 0; ti < fam.tSamples.size(); ++ti)
                for (size_t j = 0; j < pairs.size(); ++j) {
                    const Real mt = fam.perT[ti].mt;
                    slacked.push_back(
                        mt > 0.0 ? std::max(0.0, pairs[j][1] - unit / mt) : pairs[j][1]);
                }
            const ConvolutionSetFamily tgt = conv_family(F, G, tList, slacked, k);
            for (size_t ti = 0; ti < fam.tSamples.size(); ++ti) {
                if (!(fam.perT[ti].mt > 0.0)) continue;
                const Vec x0 = fam.perT[ti].x0;
                for (size_t j = 0; j < pairs.size(); ++j) {
                    const Real t0 = pairs[j][0], t1 = pairs[j][1];
                    const Real factor = (1.0 - std::pow(t1, 1.0 / k)) /
                                        (1.0 - std::pow(t0, 1.0 / k));
                    const Mask& C0 = fam.cSets[ti][j];
                    const Mask& C1 = tgt.cSets[ti][pairs.size() * ti + j];
                    if (C0.empty() || C1.count() < vdetail::min_target_cells(n))
                        continue;
                    for (const Vec& p : vdetail::mask_generators(C0)) {
                        const Vec z = x0 + (p - x0) * factor;
                        worst = std::max(worst, vdetail::cell_distance(C1, z));
                    }
                }
            }
        } else if (lemma == "half_translate") {
            const ConvolutionSetFamily fam = conv_family(F, G, tList, {0.0}, n);
            for (size_t ti = 0; ti < fam.tSamples.size(); ++ti) {
                if (!(fam.perT[ti].mt > 0.0)) continue;
                const Real t = fam.tSamples[ti];
                const Mask a0 = a_set(F, G, t, Vec(n));
                if (a0.empty()) continue;
                const Mask& c0 = fam.cSets[ti][0];
                long onCount = 0;
                for (long f = 0; f < c0.geom.size(); ++f)
                    if (c0.on[static_cast<size_t>(f)]) ++onCount;
                if (onCount == 0) continue;
                std::vector<long> xs;
                const long want = std::min<long>(4, onCount);
                long seen = 0;
                for (long f = 0; f < c0.geom.size(); ++f) {
                    if (!c0.on[static_cast<size_t>(f)]) continue;
                    if (seen * want % onCount < want) xs.push_back(f);
                    if (static_cast<long>(xs.size()) >= want) break;
                    ++seen;
                }
                for (long f : xs) {
                    const Vec x = c0.geom.point(f);
                    const Mask ax = a_set(F, G, t, x);
                    if (ax.empty()) continue;
                    for (const Vec& p : vdetail::mask_generators(ax)) {
                        const Vec q = p - x * 0.5;
                        worst = std::max(worst, vdetail::cell_distance(a0, q));
                    }
                }
            }
        } else if (lemma == "sandwich") {
            std::vector<Real> tUnion;
            for (Real t : tList) {
                tUnion.push_back(t);
                tUnion.push_back(t * t);
            }
            std::sort(tUnion.begin(), tUnion.end());
            tUnion.erase(std::unique(tUnion.begin(), tUnion.end()), tUnion.end());
            const std::vector<Real> thetas = {0.3, 0.6};
            const ConvolutionSetFamily fam = conv_family(F, G, tUnion, thetas, n);
            auto index_of = [&](Real t) {
                const auto it =
                    std::lower_bound(fam.tSamples.begin(), fam.tSamples.end(), t - 1e-12);
                return static_cast<size_t>(it - fam.tSamples.begin());
            };
            for (Real t : tList) {
                const size_t it1 = index_of(t), it2 = index_of(t * t);
                const Real mt = fam.perT[it1].mt, mt2 = fam.perT[it2].mt;
                if (!(mt > 0.0) || !(mt2 > 0.0)) continue;
                const Mask A1 = a_set(F, G, t, Vec(n));
                const Mask A2 = a_set(F, G, t * t, Vec(n));
                if (A1.count() == 0 || A2.count() == 0) continue;
                const vdetail::OverlapBody lower(A1);
                const vdetail::OverlapBody upper(A2);
                for (size_t tj = 0; tj < thetas.size(); ++tj) {
                    const Mask& C = fam.cSets[it1][tj];
                    if (C.empty()) continue;
                    const Real thrLow = thetas[tj] * static_cast<Real>(A1.count());
                    const Real thetaUp = std::min(1.0, thetas[tj] * mt / mt2);
                    const Real thrUp = thetaUp * static_cast<Real>(A2.count());
                    for (const Vec& p : lower.boundary_points(thrLow))
                        worst = std::max(worst, vdetail::cell_distance(C, p));
                    for (const Vec& p : vdetail::mask_generators(C))
                        worst = std::max(worst, upper.distance2(p, thrUp));
                }
            }
        } else {
            throw std::invalid_argument("check_structure: unknown lemma " + lemma);
        }

        r.lhs = static_cast<Real>(worst);
        r.rhs = 1.0;
        vdetail::finish_report(r, cfg.tolerance);
        out.checks.push_back(std::move(r));
    }
    return out;
}

/* Midpoint value of the theta integral identity for small n, k. */
inline InequalityReport theta_integral_report(int n, int k, const VerifyConfig& cfg) {
    if (n < 1 || n > 3 || k < 1 || k > 3)
        throw std::invalid_argument("theta_integral: n and k must lie in 1..3");
    InequalityReport r;
    r.name = "theta_integral";
    r.seed = cfg.seed;
    const long S = 2000000;
    const Real invK = 1.0 / static_cast<Real>(k);
    const Real sum = parallel_chunk_reduce<Real>(
        S, 65536, 0.0,
        [&](long lo, long hi) {
            Real acc = 0.0;
            for (long i = lo; i < hi; ++i) {
                const Real th = (static_cast<Real>(i) + 0.5) / static_cast<Real>(S);
                acc += std::pow(1.0 - std::pow(th, invK), n);
            }
            return acc;
        },
        [](const Real& a, const Real& b) { return a + b; });
    r.lhs = sum / static_cast<Real>(S);
    r.rhs = 1.0 / static_cast<Real>(binomial(n + k, k));
    vdetail::finish_report(r, cfg.tolerance);
    return r;
}

/* ------------------------------------------------------------------ */
/* Equality certificate                                               */
/*                                                                    */
/* Certifies the cone-over-a-simplex shape: every sampled superlevel  */
/* hull has n+1 vertices after collinearity pruning, and the top      */
/* level set hugs one facet of each sampled hull.                     */
/* ------------------------------------------------------------------ */

struct CertificateEvidence {
    bool certified = false;
    int maxHullVertices = 0;
    Real worstFacetGap = 0.0;
    Real simplicity = 0.0;
};

namespace vdetail {

inline Real cross2(const Vec& a, const Vec& b) { return cross(a, b)[2]; }

inline std::vector<Vec> prune_collinear(std::vector<Vec> pts, Real tol) {
    bool changed = true;
    while (changed && pts.size() > 3) {
        changed = false;
        for (size_t i = 0; i < pts.size(); ++i) {
            const Vec& u = pts[(i + pts.size() - 1) % pts.size()];
            const Vec& v = pts[i];
            const Vec& w = pts[(i + 1) % pts.size()];
            const Real base = norm(w - u);
            if (base < 1e-12) continue;
            if (std::abs(cross2(w - u, v - u)) / base < tol) {
                pts.erase(pts.begin() + static_cast<long>(i));
                changed = true;
                break;
            }
        }
    }
    return pts;
}

inline Real dist_point_segment(const Vec& p, const Vec& a, const Vec& b) {
    const Vec d = b - a;
    const Real len2 = dot(d, d);
    if (len2 < 1e-24) return norm(p - a);
    const Real t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
    return norm(p - (a + d * t));
}

inline Real hausdorff_to_segment(const std::vector<Vec>& peak, const Vec& a, const Vec& b) {
    Real d1 = 0.0;
    for (const Vec& p : peak) d1 = std::max(d1, dist_point_segment(p, a, b));
    Real d2 = 0.0;
    for (int k = 0; k < 7; ++k) {
        const Vec s = a + (b - a) * (static_cast<Real>(k) / 6.0);
        Real best = kPosInf;
        for (const Vec& p : peak) best = std::min(best, norm(s - p));
        d2 = std::max(d2, best);
    }
    return std::max(d1, d2);
}

/* Largest triangle with vertices among the polygon's own, as an area
   fraction; 1 exactly for triangles. */
inline Real inscribed_triangle_fraction(const Polytope& P) {
    if (P.dim() != 2 || !P.full_dim()) return 0.0;
    const auto& v = P.vertices();
    Real best = 0.0;
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = i + 1; j < v.size(); ++j)
            for (size_t k = j + 1; k < v.size(); ++k)
                best = std::max(best, 0.5 * std::abs(cross2(v[j] - v[i], v[k] - v[i])));
    return best / P.volume();
}

} // namespace vdetail

inline Real polygon_simplicity(const Polytope& P) {
    if (P.dim() == 1) return P.full_dim() ? 1.0 : 0.0;
    return vdetail::inscribed_triangle_fraction(P);
}

inline CertificateEvidence simplex_certificate(const LogConcaveModel& m, const VerifyConfig& cfg) {
    const int n = model_dim(m);
    CertificateEvidence ev;

    if (const auto* ind = std::get_if<IndicatorModel>(&m.value)) {
        const Polytope& K = ind->body;
        if (!K.full_dim()) return ev;
        ev.maxHullVertices = static_cast<int>(K.vertices().size());
        ev.worstFacetGap = 0.0;
        ev.simplicity = polygon_simplicity(K);
        ev.certified = ev.maxHullVertices == n + 1;
        return ev;
    }

    if (n > 2) throw std::invalid_argument("simplex_certificate: grids support dimension 1..2");
    const GridFunction F = vdetail::raster_single(m, cfg.resolution, cfg.epsilonTail);
    const Real sup = F.sup();
    Real hmax = 0.0;
    for (int i = 0; i < n; ++i) hmax = std::max(hmax, F.geom.spacing[i]);
    const Real tolLen = 1.5 * hmax;

    // top level set, carried as node points
    std::vector<Vec> peak;
    {
        const Real supLog = F.sup_log();
        for (long f = 0; f < F.geom.size(); ++f)
            if (F.logv[static_cast<size_t>(f)] >= supLog - 1e-9) peak.push_back(F.geom.point(f));
    }

    const int tCount = std::clamp(cfg.tSamples / 8, 4, 8);
    bool allSimplex = true;
    Real worstGap = 0.0;
    Real simplicity = 0.0;
    Real midBest = kPosInf;

    for (int j = 0; j < tCount; ++j) {
        const Real t = 0.1 + 0.8 * (static_cast<Real>(j) + 0.5) / static_cast<Real>(tCount);
        const Mask mset = level_set(F, std::sqrt(t) * sup);
        if (mset.empty()) continue;
        const Polytope hull = hull_of_mask(mset);
        if (n == 1) {
            const auto& v = hull.vertices();
            ev.maxHullVertices = std::max(ev.maxHullVertices, static_cast<int>(v.size()));
            // A level interval narrower than one cell shows up as a single
            // node; that is still an interval at this resolution.
            if (v.empty() || v.size() > 2) allSimplex = false;
            Real gap = kPosInf;
            for (const Vec& e : v) {
                Real far = 0.0;
                for (const Vec& p : peak) far = std::max(far, norm(p - e));
                gap = std::min(gap, far);
            }
            worstGap = std::max(worstGap, gap);
            simplicity = 1.0;
            continue;
        }
        if (!hull.full_dim()) {
            allSimplex = false;
            continue;
        }
        const std::vector<Vec> pruned = vdetail::prune_collinear(hull.vertices(), tolLen);
        ev.maxHullVertices = std::max(ev.maxHullVertices, static_cast<int>(pruned.size()));
        if (static_cast<int>(pruned.size()) != n + 1) allSimplex = false;
        Real gap = kPosInf;
        for (size_t i = 0; i < pruned.size(); ++i) {
            const Vec& a = pruned[i];
            const Vec& b = pruned[(i + 1) % pruned.size()];
            gap = std::min(gap, vdetail::hausdorff_to_segment(peak, a, b));
        }
        worstGap = std::max(worstGap, gap);
        const Real dm = std::abs(t - 0.5);
        if (dm < midBest) {
            midBest = dm;
            simplicity = vdetail::inscribed_triangle_fraction(hull);
        }
    }

    ev.worstFacetGap = worstGap;
    ev.simplicity = simplicity;
    ev.certified = allSimplex && worstGap <= tolLen && ev.maxHullVertices > 0;
    return ev;
}

/* ------------------------------------------------------------------ */
/* Polar chain                                                        */
/* ------------------------------------------------------------------ */

struct PolarChain {
    Real lhs = 0.0;    // |K cap L| times the union hull volume
    Real middle = 0.0; // harmonic-mean body volume times the union hull volume
    Real rhs = 0.0;    // 2^n |K| |L|
};

inline PolarChain polar_chain(const Polytope& K, const Polytope& L) {
    if (K.dim() != 2 || L.dim() != 2)
        throw std::invalid_argument("polar_chain: supported in dimension 2 only");
    if (!K.full_dim() || !L.full_dim())
        throw std::invalid_argument("polar_chain: bodies must be full-dimensional");
    const Vec zero(2);
    if (!K.contains(zero, -1e-9) || !L.contains(zero, -1e-9))
        throw std::invalid_argument("polar_chain: origin must be strictly interior");
    const Real hullU = convex_hull_union(K, L.reflected()).volume();
    const Polytope mid = polar(minkowski_sum(polar(K), polar(L.reflected())).scaled(0.5));
    PolarChain ch;
    ch.lhs = intersect(K, L).volume() * hullU;
    ch.middle = mid.volume() * hullU;
    ch.rhs = 4.0 * K.volume() * L.volume();
    return ch;
}

inline std::vector<InequalityReport> check_polar(const Polytope& K, const Polytope& L,
                                                 const VerifyConfig& cfg) {
    const PolarChain ch = polar_chain(K, L);
    std::vector<InequalityReport> rows;
    auto add = [&](const std::string& name, Real lhs, Real rhs) {
        InequalityReport r;
        r.name = name;
        r.seed = cfg.seed;
        r.lhs = lhs;
        r.rhs = rhs;
        vdetail::finish_report(r, 1e-9);
        rows.push_back(std::move(r));
    };
    add("polar", ch.lhs, ch.rhs);
    add("polar_middle", ch.middle, ch.rhs);
    add("polar_order", ch.lhs, ch.middle);
    return rows;
}

/* ------------------------------------------------------------------ */
/* Random instances                                                   */
/* ------------------------------------------------------------------ */

inline Polytope random_polygon(uint64_t seed, long index) {
    const CounterRng rng{seed};
    for (int attempt = 0; attempt < 64; ++attempt) {
        const uint64_t key = static_cast<uint64_t>(index) * 64 + static_cast<uint64_t>(attempt);
        const int count = 3 + static_cast<int>(rng.pick(key, 0, 6));
        std::vector<Vec> pts;
        pts.reserve(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i)
            pts.push_back(Vec(2, rng.uniform(key, static_cast<uint64_t>(1 + 2 * i), -1.0, 1.0),
                              rng.uniform(key, static_cast<uint64_t>(2 + 2 * i), -1.0, 1.0)));
        Polytope P = Polytope::from_points(2, pts);
        if (P.full_dim() && P.volume() >= 1e-2) return P;
    }
    throw std::runtime_error("random_polygon: sampling failed");
}

/* Polygon indicator shaded by a random piecewise-linear potential,
   sampled directly on its own lattice and normalised to sup 1. */
inline LogConcaveModel random_logconcave_grid(uint64_t seed, long index, long resolution) {
    const CounterRng rng{seed};
    const uint64_t k = static_cast<uint64_t>(index);
    const long res = std::max<long>(16, resolution);
    for (int attempt = 0; attempt < 8; ++attempt) {
        const Polytope P =
            random_polygon(seed ^ (0x5eedULL + static_cast<uint64_t>(attempt) * 0x9e37ULL), index);
        const Box bb = P.bbox();
        const Vec c = P.vertex_mean();
        const int m = 2 + static_cast<int>(rng.pick(k, 40, 3));
        std::vector<Vec> slopes;
        std::vector<Real> offs;
        for (int j = 0; j < m; ++j) {
            slopes.push_back(Vec(2, rng.uniform(k, static_cast<uint64_t>(41 + 3 * j), -1.0, 1.0),
                                 rng.uniform(k, static_cast<uint64_t>(42 + 3 * j), -1.0, 1.0)));
            offs.push_back(rng.uniform(k, static_cast<uint64_t>(43 + 3 * j), 0.0, 0.5));
        }
        Vec org(2);
        std::array<Real, 3> sp{1.0, 1.0, 1.0};
        std::array<long, 3> sh{1, 1, 1};
        for (int i = 0; i < 2; ++i) {
            sp[static_cast<size_t>(i)] = bb.extent(i) / static_cast<Real>(res);
            sh[static_cast<size_t>(i)] = res;
            org[i] = bb.lo[i] + 0.5 * sp[static_cast<size_t>(i)];
        }
        GridGeom geom(2, org, sp, sh);
        std::vector<Real> logv(static_cast<size_t>(geom.size()), kNegInf);
        Real top = kNegInf;
        for (long f = 0; f < geom.size(); ++f) {
            const Vec p = geom.point(f);
            if (!P.contains(p)) continue;
            Real env = 0.0;
            for (int j = 0; j < m; ++j)
                env = std::max(env, dot(slopes[static_cast<size_t>(j)], p - c) +
                                        offs[static_cast<size_t>(j)]);
            logv[static_cast<size_t>(f)] = -env;
            top = std::max(top, -env);
        }
        if (top == kNegInf) continue;
        for (Real& v : logv)
            if (v > kNegInf) v -= top;
        return make_grid_model(GridFunction(geom, logv));
    }
    throw std::runtime_error("random_logconcave_grid: sampling failed");
}

/* Analytic model with exact superlevel volumes, for concavity checks. */
inline LogConcaveModel random_analytic_model(uint64_t seed, long index) {
    const CounterRng rng{seed};
    const uint64_t k = static_cast<uint64_t>(index);
    switch (rng.pick(k, 60, 3)) {
        case 0: {
            const Real a = rng.uniform(k, 61, -0.6, 0.6), b = rng.uniform(k, 62, -0.6, 0.6);
            const Real c = rng.uniform(k, 63, -0.6, 0.6), d = rng.uniform(k, 64, -0.6, 0.6);
            SymMat cov = SymMat::identity(2);
            cov.a[0][0] = a * a + b * b + 0.15;
            cov.a[1][1] = c * c + d * d + 0.15;
            cov.a[0][1] = cov.a[1][0] = a * c + b * d;
            const Vec mean(2, rng.uniform(k, 65, -0.3, 0.3), rng.uniform(k, 66, -0.3, 0.3));
            return make_gaussian(mean, cov, 1.0);
        }
        case 1: {
            const Vec apex(2, rng.uniform(k, 67, -0.3, 0.3), rng.uniform(k, 68, -0.3, 0.3));
            const Vec slope(2, rng.uniform(k, 69, 0.7, 1.8), rng.uniform(k, 70, 0.7, 1.8));
            std::vector<Vec> normals{Vec(2, -1.0, 0.0), Vec(2, 0.0, -1.0)};
            return make_exp_cone(1.0, slope, apex, normals);
        }
        default:
            return make_indicator(random_polygon(seed ^ 0xabcdULL, index), 1.0);
    }
}

/* ------------------------------------------------------------------ */
/* Suites                                                             */
/* ------------------------------------------------------------------ */

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"default",   "bodies", "functions",
                                                   "structure", "polar",  "equality"};
    return names;
}

inline bool all_pass(const std::vector<InstanceReports>& instances) {
    for (const auto& inst : instances)
        for (const auto& c : inst.checks)
            if (!c.pass) return false;
    return true;
}

namespace vdetail {

constexpr unsigned kBodies = 1, kFunctions = 2, kStructure = 4, kPolar = 8, kEquality = 16;

inline unsigned suite_flags(const std::string& suite) {
    if (suite == "default") return kBodies | kFunctions | kStructure | kPolar;
    if (suite == "bodies") return kBodies;
    if (suite == "functions") return kFunctions;
    if (suite == "structure") return kStructure;
    if (suite == "polar") return kPolar;
    if (suite == "equality") return kEquality;
    throw std::invalid_argument("unknown suite: " + suite);
}

struct SuiteItem {
    std::string name;
    int dim = 2;
    unsigned flags = 0;
    std::function<InstanceReports(const VerifyConfig&)> run;
};

struct BodyRow {
    std::string ineq;
    std::optional<Polytope> L;
};

inline InstanceReports body_instance(const std::string& name, const std::string& params,
                                     const Polytope& K, const std::vector<BodyRow>& rows,
                                     const VerifyConfig& cfg) {
    InstanceReports out;
    out.name = name;
    out.params = params;
    for (const BodyRow& row : rows) out.checks.push_back(check_body(row.ineq, K, row.L, cfg));
    return out;
}

inline Polytope suite_hexagon() {
    std::vector<Vec> pts{Vec(2, 1.0, 0.0),  Vec(2, 0.5, 0.9),   Vec(2, -0.5, 0.9),
                         Vec(2, -1.0, 0.0), Vec(2, -0.5, -0.9), Vec(2, 0.5, -0.9)};
    return Polytope::from_points(2, pts);
}

inline std::vector<SuiteItem> suite_items() {
    std::vector<SuiteItem> items;

    // bodies
    auto body_item = [](std::string name, int dim, unsigned flags, Polytope K,
                        std::vector<BodyRow> rows, std::string params) {
        return SuiteItem{name, dim, flags,
                         [name, K = std::move(K), rows = std::move(rows),
                          params = std::move(params)](const VerifyConfig& c) {
                             return body_instance(name, params, K, rows, c);
                         }};
    };
    const std::vector<std::string> allBody = {"rs_diff",      "rs_two",     "rs_union",
                                              "rs_union_two", "rs_surface", "bm"};
    auto plain_rows = [&allBody] {
        std::vector<BodyRow> rows;
        for (const auto& s : allBody) rows.push_back({s, std::nullopt});
        return rows;
    };
    items.push_back(body_item("body-segment1d", 1, kBodies | kEquality,
                              make_box(Vec::of({0.0}), Vec::of({1.0})), plain_rows(),
                              "K = [0,1]"));
    items.push_back(body_item("body-simplex2d", 2, kBodies | kEquality, make_simplex(2),
                              plain_rows(), "K = unit triangle"));
    items.push_back(body_item("body-square2d", 2, kBodies,
                              make_box(Vec(2), Vec(2, 1.0, 1.0)), plain_rows(),
                              "K = unit square"));
    items.push_back(body_item("body-cross2d", 2, kBodies, make_cross_polytope(2), plain_rows(),
                              "K = cross polytope"));
    items.push_back(body_item("body-hexagon2d", 2, kBodies, suite_hexagon(), plain_rows(),
                              "K = hexagon"));
    {
        const Polytope L = make_box(Vec(2), Vec(2, 1.0, 1.0));
        items.push_back(body_item("body-mixed2d", 2, kBodies, make_simplex(2),
                                  {{"rs_two", L}, {"rs_union_two", L}, {"rs_surface", L},
                                   {"bm", L}},
                                  "K = unit triangle, L = unit square"));
    }
    items.push_back(body_item("body-simplex3d", 3, kBodies, make_simplex(3),
                              {{"rs_diff", std::nullopt},
                               {"rs_union", std::nullopt},
                               {"rs_union_two", std::nullopt},
                               {"bm", std::nullopt}},
                              "K = unit 3-simplex"));

    // functions
    using FunRow = std::pair<std::string, std::optional<LogConcaveModel>>;
    auto fun_item = [](std::string name, int dim, unsigned flags, LogConcaveModel fm,
                       std::vector<FunRow> rows, std::string params) {
        return SuiteItem{name, dim, flags,
                         [name, fm = std::move(fm), rows = std::move(rows),
                          params = std::move(params)](const VerifyConfig& c) {
                             InstanceReports out;
                             out.name = name;
                             out.params = params;
                             for (const auto& row : rows)
                                 out.checks.push_back(check_function(row.first, fm, row.second, c));
                             return out;
                         }};
    };
    {
        const LogConcaveModel tent = make_indicator(make_box(Vec::of({0.0}), Vec::of({1.0})));
        items.push_back(fun_item("fun-tent1d", 1, kFunctions, tent,
                                 {{"rs_fun", tent}, {"rs_self", std::nullopt},
                                  {"colesanti", std::nullopt}},
                                 "f = indicator of [0,1]"));
        items.push_back(fun_item("eq-tent1d", 1, kEquality, tent,
                                 {{"rs_fun", tent}, {"rs_self", std::nullopt}},
                                 "f = indicator of [0,1]"));
    }
    items.push_back(fun_item("fun-gauss1d", 1, kFunctions,
                             make_gaussian(Vec(1), SymMat::identity(1)),
                             {{"rs_fun", std::nullopt}, {"rs_self", std::nullopt},
                              {"colesanti", std::nullopt}},
                             "f = standard Gaussian on R"));
    {
        const LogConcaveModel e1 = make_exp_cone(1.0, Vec::of({1.0}), Vec(1), {Vec::of({-1.0})});
        items.push_back(fun_item("fun-expcone1d", 1, kFunctions, e1,
                                 {{"rs_fun", std::nullopt}, {"rs_self", std::nullopt},
                                  {"colesanti", std::nullopt}},
                                 "f = exp(-x) on [0, inf)"));
        items.push_back(fun_item("eq-expcone1d", 1, kEquality, e1,
                                 {{"rs_self", std::nullopt}, {"colesanti", std::nullopt}},
                                 "f = exp(-x) on [0, inf)"));
    }
    {
        const LogConcaveModel s2 = make_indicator(make_simplex(2));
        items.push_back(fun_item("fun-simplex2d", 2, kFunctions, s2,
                                 {{"rs_fun", std::nullopt}, {"rs_self", std::nullopt},
                                  {"rs_surface_fun", std::nullopt}, {"colesanti", std::nullopt}},
                                 "f = indicator of the unit triangle"));
        items.push_back(fun_item("eq-simplex2d-fun", 2, kEquality, s2,
                                 {{"rs_fun", std::nullopt}, {"rs_self", std::nullopt},
                                  {"rs_surface_fun", std::nullopt}},
                                 "f = indicator of the unit triangle"));
    }
    items.push_back({"fun-gauss2d", 2, kFunctions, [](const VerifyConfig& c) {
                         /* plane quadratures grow quadratically with the grid
                            while the ratios are settled well before this cap */
                         VerifyConfig cc = c;
                         cc.resolution = std::min<long>(cc.resolution, 64);
                         const LogConcaveModel m = make_gaussian(Vec(2), SymMat::identity(2));
                         InstanceReports out;
                         out.name = "fun-gauss2d";
                         out.params = "f = standard Gaussian on R^2";
                         for (const char* nm : {"rs_fun", "rs_self", "colesanti"})
                             out.checks.push_back(check_function(nm, m, std::nullopt, cc));
                         return out;
                     }});
    {
        const LogConcaveModel s3 = make_indicator(make_simplex(3));
        items.push_back(fun_item("fun-simplex3d", 3, kFunctions, s3,
                                 {{"rs_self", std::nullopt}, {"colesanti", std::nullopt}},
                                 "f = indicator of the unit 3-simplex"));
        items.push_back(fun_item("eq-simplex3d-fun", 3, kEquality, s3,
                                 {{"rs_self", std::nullopt}},
                                 "f = indicator of the unit 3-simplex"));
    }

    // structure
    const std::vector<std::string> lemmas1d = {"combination", "scaling", "half_translate",
                                               "sandwich", "mt_logconcave"};
    auto struct_item = [](std::string name, int dim, LogConcaveModel m,
                          std::vector<std::string> lemmas, long resCap) {
        return SuiteItem{name, dim, kStructure,
                         [name, m = std::move(m), lemmas = std::move(lemmas),
                          resCap](const VerifyConfig& c) {
                             VerifyConfig cc = c;
                             cc.resolution = std::min(cc.resolution, resCap);
                             return check_structure({name, m, lemmas}, cc);
                         }};
    };
    items.push_back(struct_item("struct-tent1d", 1,
                                make_indicator(make_box(Vec::of({0.0}), Vec::of({1.0}))),
                                lemmas1d, 256));
    items.push_back(struct_item("struct-square2d", 2,
                                make_indicator(make_box(Vec(2), Vec(2, 1.0, 1.0))),
                                structure_lemma_names(), 96));
    items.push_back(struct_item("struct-simplex2d", 2, make_indicator(make_simplex(2)),
                                structure_lemma_names(), 96));
    items.push_back(struct_item("struct-gauss2d", 2, make_gaussian(Vec(2), SymMat::identity(2)),
                                structure_lemma_names(), 96));
    items.push_back(struct_item(
        "struct-expcone2d", 2,
        make_exp_cone(1.0, Vec(2, 1.0, 1.0), Vec(2), {Vec(2, -1.0, 0.0), Vec(2, 0.0, -1.0)}),
        structure_lemma_names(), 96));
    for (long i = 0; i < 4; ++i) {
        const std::string gname = "struct-rand-g" + std::to_string(i);
        items.push_back({gname, 2, kStructure, [gname, i](const VerifyConfig& c) {
                             VerifyConfig cc = c;
                             cc.resolution = std::min<long>(cc.resolution, 64);
                             const LogConcaveModel m =
                                 random_logconcave_grid(c.seed, i, cc.resolution);
                             return check_structure({gname, m,
                                                     {"combination", "scaling", "scaling_k",
                                                      "half_translate", "sandwich"}},
                                                    cc);
                         }});
        const std::string aname = "struct-rand-a" + std::to_string(i);
        items.push_back({aname, 2, kStructure, [aname, i](const VerifyConfig& c) {
                             VerifyConfig cc = c;
                             cc.resolution = std::min<long>(cc.resolution, 80);
                             const LogConcaveModel m = random_analytic_model(c.seed, i);
                             return check_structure({aname, m, structure_lemma_names()}, cc);
                         }});
    }
    auto theta_item = [](int n, int k) {
        const std::string name = "theta-n" + std::to_string(n) + "k" + std::to_string(k);
        return SuiteItem{name, n, kStructure, [name, n, k](const VerifyConfig& c) {
                             InstanceReports out;
                             out.name = name;
                             out.params = "theta integral identity, n = " + std::to_string(n) +
                                          ", k = " + std::to_string(k);
                             out.checks.push_back(theta_integral_report(n, k, c));
                             return out;
                         }};
    };
    items.push_back(theta_item(1, 1));
    items.push_back(theta_item(2, 1));
    items.push_back(theta_item(2, 2));
    items.push_back(theta_item(3, 2));
    items.push_back(theta_item(3, 3));

    // polar
    auto polar_item = [](std::string name, Polytope K, Polytope L, std::string params) {
        return SuiteItem{name, 2, kPolar,
                         [name, K = std::move(K), L = std::move(L),
                          params = std::move(params)](const VerifyConfig& c) {
                             InstanceReports out;
                             out.name = name;
                             out.params = params;
                             out.checks = check_polar(K, L, c);
                             return out;
                         }};
    };
    {
        const Polytope sq = make_box(Vec(2, -1.0, -1.0), Vec(2, 1.0, 1.0));
        items.push_back(polar_item("polar-square", sq, sq, "K = L = [-1,1]^2"));
        const Polytope T = make_simplex(2);
        const Polytope Tc = T.translated(T.vertex_mean() * -1.0);
        items.push_back(polar_item("polar-simplex", Tc, Tc, "K = L = centred triangle"));
        items.push_back(polar_item("polar-mixed", sq, suite_hexagon(), "K = square, L = hexagon"));
    }

    return items;
}

} // namespace vdetail

inline std::vector<InstanceReports> run_suite(const std::string& suite, int dim,
                                              const VerifyConfig& cfg,
                                              const std::string& instanceFilter = "") {
    if (dim < 1 || dim > 3) throw std::invalid_argument("run_suite: dim must lie in 1..3");
    const unsigned want = vdetail::suite_flags(suite);
    std::vector<vdetail::SuiteItem> all = vdetail::suite_items();
    std::vector<vdetail::SuiteItem> selected;
    for (auto& item : all) {
        if (item.dim != dim || !(item.flags & want)) continue;
        if (!instanceFilter.empty() && item.name.find(instanceFilter) == std::string::npos)
            continue;
        selected.push_back(std::move(item));
    }
    std::vector<InstanceReports> out(selected.size());
    parallel_for(static_cast<long>(selected.size()), [&](long i) {
        out[static_cast<size_t>(i)] = selected[static_cast<size_t>(i)].run(cfg);
    });
    std::sort(out.begin(), out.end(),
              [](const InstanceReports& a, const InstanceReports& b) { return a.name < b.name; });
    return out;
}

inline serialize::ordered_json report_json(const std::vector<InstanceReports>& instances) {
    serialize::ordered_json j;
    j["version"] = 1;
    j["instances"] = serialize::ordered_json::array();
    for (const auto& inst : instances) {
        serialize::ordered_json ji;
        ji["name"] = inst.name;
        ji["params"] = inst.params;
        ji["checks"] = serialize::ordered_json::array();
        for (const auto& c : inst.checks) {
            serialize::ordered_json jc;
            jc["inequality"] = c.name;
            jc["lhs"] = c.lhs;
            jc["rhs"] = c.rhs;
            jc["ratio"] = c.ratio;
            jc["pass"] = c.pass;
            jc["error_estimate"] = c.errorEstimate;
            jc["resolution"] = c.resolution;
            jc["seed"] = c.seed;
            ji["checks"].push_back(std::move(jc));
        }
        j["instances"].push_back(std::move(ji));
    }
    return j;
}

/* ------------------------------------------------------------------ */
/* Fuzzing                                                            */
/* ------------------------------------------------------------------ */

struct FuzzRow {
    uint64_t seed = 0;
    std::string instance;
    std::string inequality;
    Real ratio = 0.0;
    long resolution = 0;
};

inline std::vector<FuzzRow> fuzz_polygons(const std::string& inequality, long count, uint64_t seed,
                                          const VerifyConfig& cfgIn) {
    static const std::vector<std::string> supported = {
        "rs_diff", "rs_two", "rs_union", "rs_union_two", "rs_surface", "bm", "polar"};
    if (std::find(supported.begin(), supported.end(), inequality) == supported.end())
        throw std::invalid_argument("fuzz: unsupported inequality " + inequality);
    if (count < 1) throw std::invalid_argument("fuzz: count must be positive");
    VerifyConfig cfg = cfgIn;
    cfg.seed = seed;
    std::vector<FuzzRow> rows(static_cast<size_t>(count));
    parallel_for(count, [&](long i) {
        Polytope P = random_polygon(seed, i);
        if (inequality == "rs_union" || inequality == "rs_union_two" || inequality == "polar")
            P = P.translated(P.vertex_mean() * -1.0);
        char buf[32];
        std::snprintf(buf, sizeof buf, "poly-%06ld", i);
        FuzzRow row;
        row.seed = seed;
        row.instance = buf;
        row.inequality = inequality;
        if (inequality == "polar") {
            row.ratio = check_polar(P, P, cfg)[0].ratio;
            row.resolution = 0;
        } else {
            const InequalityReport rep = check_body(inequality, P, std::nullopt, cfg);
            row.ratio = rep.ratio;
            row.resolution = rep.resolution;
        }
        rows[static_cast<size_t>(i)] = std::move(row);
    });
    std::sort(rows.begin(), rows.end(), [](const FuzzRow& a, const FuzzRow& b) {
        if (a.ratio != b.ratio) return a.ratio > b.ratio;
        return a.instance < b.instance;
    });
    return rows;
}

inline std::string fuzz_csv(const std::vector<FuzzRow>& rows) {
    std::string out = "seed,instance,inequality,ratio,resolution\n";
    for (const FuzzRow& r : rows) {
        out += std::to_string(r.seed);
        out += ',';
        out += r.instance;
        out += ',';
        out += r.inequality;
        out += ',';
        out += serialize::fmt_real(r.ratio);
        out += ',';
        out += std::to_string(r.resolution);
        out += '\n';
    }
    return out;
}

} // namespace logconv::verify
