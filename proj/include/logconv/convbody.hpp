#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "grid_ops.hpp"
#include "parallel.hpp"
#include "polytope.hpp"
#include "rng.hpp"

namespace logconv {

/*
 * Convolution sections of a pair of grid functions.
 *
 * For x on the sum lattice, the section at level t in (0,1] is
 *
 *     A_t(x) = { z : f(z) * g(x - z) >= t * sup f * sup g },
 *
 * a cell mask on f's lattice.  M_t is the largest measure of a section over
 * x, and the (theta,t)-convolution set keeps the x whose section measure is
 * at least theta * M_t.  The measure is cell volume (k = n) or the W1 of the
 * hull of the section's cell centers (k = n - 1, 2D only).
 */

namespace convdetail {

inline void check_pair(const GridFunction& f, const GridFunction& g, const char* who) {
    if (f.geom.dim != g.geom.dim)
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    if (!f.geom.same_spacing(g.geom))
        throw std::invalid_argument(std::string(who) + ": spacing mismatch");
}

/* x snapped to the nearest sum-lattice node f.origin + g.origin + k*h. */
inline std::array<long, 3> sum_index(const GridGeom& fg, const GridGeom& gg, const Vec& x) {
    std::array<long, 3> k{0, 0, 0};
    for (int i = 0; i < fg.dim; ++i)
        k[i] = std::lround((x[i] - (fg.origin[i] + gg.origin[i])) / fg.spacing[i]);
    return k;
}

/* Cell counts of A_{t_i}(x) for every x on the sum lattice and every level of
   an ascending log-threshold grid, in one pass over support pairs.  Each pair
   lands in the largest threshold bucket it clears; a descending suffix sum
   then yields counts per level.  Integer adds commute exactly, so the atomic
   accumulation is deterministic under any thread interleaving. */
inline std::vector<int32_t> level_counts(const GridFunction& f, const GridFunction& g,
                                         const std::vector<Real>& logLevels, GridGeom& xGeom) {
    xGeom = griddetail::sum_geom(f.geom, g.geom);
    const size_t X = static_cast<size_t>(xGeom.size());
    const size_t T = logLevels.size();
    const Real base = f.sup_log() + g.sup_log();
    std::vector<Real> thr(T);
    for (size_t i = 0; i < T; ++i) thr[i] = logLevels[i] + base - 1e-9;
    if (!std::is_sorted(thr.begin(), thr.end()))
        throw std::invalid_argument("level_counts: levels must ascend");

    std::vector<long> fsup;
    for (long i = 0; i < f.geom.size(); ++i)
        if (f.logv[static_cast<size_t>(i)] > kNegInf) fsup.push_back(i);

    std::vector<std::atomic<int32_t>> acc(T * X);
    const long gn0 = g.geom.shape[0];
    const long gn1 = g.geom.dim == 2 ? g.geom.shape[1] : 1;
    const long xn1 = xGeom.dim == 2 ? xGeom.shape[1] : 1;
    parallel_for(static_cast<long>(fsup.size()), [&](long fi) {
        const long zf = fsup[static_cast<size_t>(fi)];
        const std::array<long, 3> zi = f.geom.unflat(zf);
        const Real lf = f.logv[static_cast<size_t>(zf)];
        for (long w0 = 0; w0 < gn0; ++w0) {
            const long rowBase = (zi[0] + w0) * xn1 + zi[1];
            const Real* grow = g.logv.data() + static_cast<size_t>(w0 * gn1);
            for (long w1 = 0; w1 < gn1; ++w1) {
                const Real lg = grow[w1];
                if (lg == kNegInf) continue;
                const Real p = lf + lg;
                auto it = std::upper_bound(thr.begin(), thr.end(), p);
                if (it == thr.begin()) continue;
                const size_t bi = static_cast<size_t>(it - thr.begin()) - 1;
                acc[bi * X + static_cast<size_t>(rowBase + w1)].fetch_add(1, std::memory_order_relaxed);
            }
        }
    });

    std::vector<int32_t> counts(T * X);
    for (size_t x = 0; x < X; ++x) counts[(T - 1) * X + x] = acc[(T - 1) * X + x].load();
    for (size_t i = T - 1; i-- > 0;)
        for (size_t x = 0; x < X; ++x)
            counts[i * X + x] = acc[i * X + x].load() + counts[(i + 1) * X + x];
    return counts;
}

/* Per-x W1 of the section hull at a single adjusted log threshold (2D).
   val[x] = -1 marks an empty section.  Row endpoints suffice for the hull
   because each row of a section of log-concave inputs is an interval. */
inline void section_w1_profile(const GridFunction& f, const GridFunction& g, Real thr,
                               const GridGeom& xGeom, std::vector<Real>& val) {
    const long fn0 = f.geom.shape[0], fn1 = f.geom.shape[1];
    const long gn0 = g.geom.shape[0], gn1 = g.geom.shape[1];
    const long xn1 = xGeom.shape[1];
    val.assign(static_cast<size_t>(xGeom.size()), -1.0);
    parallel_for(xGeom.size(), [&](long xf) {
        const long k0 = xf / xn1, k1 = xf % xn1;
        std::vector<Vec> pts;
        const long r0 = std::max(0L, k0 - (gn0 - 1)), r1 = std::min(fn0 - 1, k0);
        const long c0 = std::max(0L, k1 - (gn1 - 1)), c1 = std::min(fn1 - 1, k1);
        for (long i0 = r0; i0 <= r1; ++i0) {
            long lo = -1, hi = -1;
            const Real* frow = f.logv.data() + static_cast<size_t>(i0 * fn1);
            const Real* grow = g.logv.data() + static_cast<size_t>((k0 - i0) * gn1);
            for (long i1 = c0; i1 <= c1; ++i1) {
                const Real lf = frow[i1], lg = grow[k1 - i1];
                if (lf == kNegInf || lg == kNegInf || lf + lg < thr) continue;
                if (lo < 0) lo = i1;
                hi = i1;
            }
            if (lo < 0) continue;
            pts.push_back(f.geom.point({i0, lo, 0}));
            if (hi != lo) pts.push_back(f.geom.point({i0, hi, 0}));
        }
        if (!pts.empty()) val[static_cast<size_t>(xf)] = quermass_w1_of_points(2, pts);
    });
}

inline std::string fmt_real(Real v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace convdetail

/* Section mask A_t(x) on f's lattice; x snaps to the nearest sum-lattice node. */
inline Mask a_set(const GridFunction& f, const GridFunction& g, Real t, const Vec& x) {
    convdetail::check_pair(f, g, "a_set");
    if (!(t > 0.0)) throw std::invalid_argument("a_set: level must be positive");
    if (x.dim != f.geom.dim) throw std::invalid_argument("a_set: point dimension mismatch");
    const std::array<long, 3> k = convdetail::sum_index(f.geom, g.geom, x);
    const Real thr = std::log(t) + f.sup_log() + g.sup_log() - 1e-9;
    Mask m(f.geom);
    const long fn0 = f.geom.shape[0];
    const long fn1 = f.geom.dim == 2 ? f.geom.shape[1] : 1;
    const long gn0 = g.geom.shape[0];
    const long gn1 = g.geom.dim == 2 ? g.geom.shape[1] : 1;
    for (long i0 = 0; i0 < fn0; ++i0) {
        const long w0 = k[0] - i0;
        if (w0 < 0 || w0 >= gn0) continue;
        for (long i1 = 0; i1 < fn1; ++i1) {
            const long w1 = k[1] - i1;
            if (w1 < 0 || w1 >= gn1) continue;
            const Real lf = f.logv[static_cast<size_t>(i0 * fn1 + i1)];
            const Real lg = g.logv[static_cast<size_t>(w0 * gn1 + w1)];
            if (lf > kNegInf && lg > kNegInf && lf + lg >= thr)
                m.on[static_cast<size_t>(i0 * fn1 + i1)] = 1;
        }
    }
    return m;
}

struct MtResult {
    Real value = 0.0;
    Vec x0;
};

/* Largest section volume over the sum lattice, lex-smallest maximizer.
   All sections empty -> value 0 at the zero vector. */
inline MtResult m_t(const GridFunction& f, const GridFunction& g, Real t) {
    convdetail::check_pair(f, g, "m_t");
    if (!(t > 0.0)) throw std::invalid_argument("m_t: level must be positive");
    GridGeom xg;
    const std::vector<int32_t> counts =
        convdetail::level_counts(f, g, {std::log(t)}, xg);
    long arg = -1;
    int32_t best = 0;
    for (size_t i = 0; i < counts.size(); ++i)
        if (counts[i] > best) {
            best = counts[i];
            arg = static_cast<long>(i);
        }
    MtResult r;
    if (arg < 0) {
        r.x0 = Vec(f.geom.dim);
        return r;
    }
    r.value = static_cast<Real>(best) * f.geom.cell_volume();
    r.x0 = xg.point(arg);
    return r;
}

/* (theta,t)-convolution set on the sum lattice.  k = n measures sections by
   cell volume, k = n - 1 by W1 of the section hull (2D only).  theta = 0
   keeps every x with a nonempty section, theta = 1 only the maximizers. */
inline Mask conv_set(const GridFunction& f, const GridFunction& g, Real theta, Real t, int k) {
    convdetail::check_pair(f, g, "conv_set");
    if (!(t > 0.0)) throw std::invalid_argument("conv_set: level must be positive");
    if (theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("conv_set: theta must lie in [0,1]");
    const int n = f.geom.dim;
    if (k != n && k != n - 1)
        throw std::invalid_argument("conv_set: k must be n or n-1");
    if (k < 1) throw std::invalid_argument("conv_set: k = n-1 needs a 2D grid");

    if (k == n) {
        GridGeom xg;
        const std::vector<int32_t> counts =
            convdetail::level_counts(f, g, {std::log(t)}, xg);
        int32_t best = 0;
        for (int32_t c : counts) best = std::max(best, c);
        Mask m(xg);
        if (best == 0) return m;
        const Real cv = f.geom.cell_volume();
        const Real mt = static_cast<Real>(best) * cv;
        const Real cut = theta * mt - 1e-9 * std::max(1.0, mt);
        for (size_t i = 0; i < counts.size(); ++i)
            m.on[i] = counts[i] > 0 && static_cast<Real>(counts[i]) * cv >= cut ? 1 : 0;
        return m;
    }

    const GridGeom xg = griddetail::sum_geom(f.geom, g.geom);
    const Real thr = std::log(t) + f.sup_log() + g.sup_log() - 1e-9;
    std::vector<Real> w1;
    convdetail::section_w1_profile(f, g, thr, xg, w1);
    Real best = -1.0;
    for (Real v : w1) best = std::max(best, v);
    Mask m(xg);
    if (best < 0.0) return m;
    const Real cut = theta * best - 1e-9 * std::max(1.0, best);
    for (size_t i = 0; i < w1.size(); ++i) m.on[i] = w1[i] >= 0.0 && w1[i] >= cut ? 1 : 0;
    return m;
}

/* Midpoint levels (i+1/2)/count, ascending in (0,1). */
inline std::vector<Real> uniform_t_grid(int count) {
    if (count < 1) throw std::invalid_argument("uniform_t_grid: count must be positive");
    std::vector<Real> t(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        t[static_cast<size_t>(i)] = (static_cast<Real>(i) + 0.5) / static_cast<Real>(count);
    return t;
}

/* Log-spaced levels from tMin up to 1, ascending. */
inline std::vector<Real> log_t_grid(int count, Real tMin = 1e-3) {
    if (count < 2) throw std::invalid_argument("log_t_grid: need at least two levels");
    if (!(tMin > 0.0) || tMin >= 1.0)
        throw std::invalid_argument("log_t_grid: tMin must lie in (0,1)");
    std::vector<Real> t(static_cast<size_t>(count));
    const Real l0 = std::log(tMin);
    for (int i = 0; i < count; ++i) {
        const Real a = static_cast<Real>(i) / static_cast<Real>(count - 1);
        t[static_cast<size_t>(i)] = std::exp(l0 * (1.0 - a));
    }
    t.back() = 1.0;
    return t;
}

struct FamilyEntry {
    Real t = 0.0;
    Real mt = 0.0;  // largest section measure at this level
    Vec x0;         // lex-smallest maximizer; zero vector when all sections are empty
    long c0Cells = 0;
};

struct ConvolutionSetFamily {
    int kIndex = 0;
    GridGeom xGeom;
    std::vector<Real> tSamples;
    std::vector<Real> thetaSamples;
    std::vector<FamilyEntry> perT;
    std::vector<std::vector<Mask>> cSets;  // [t][theta]; built only when thetaSamples nonempty

    /* Per-level CSV: level, largest section measure, maximizer, support size
       of the theta = 0 set, then one measure column per stored theta set. */
    std::string csv() const {
        std::string out = "t,mt";
        const int d = xGeom.dim;
        for (int i = 0; i < d; ++i) out += ",x0_" + std::to_string(i);
        out += ",c0_cells";
        for (size_t j = 0; j < thetaSamples.size(); ++j)
            out += ",cvol_theta" + std::to_string(j);
        out += "\n";
        const Real xcv = xGeom.cell_volume();
        for (size_t i = 0; i < perT.size(); ++i) {
            const FamilyEntry& e = perT[i];
            out += convdetail::fmt_real(e.t) + "," + convdetail::fmt_real(e.mt);
            for (int a = 0; a < d; ++a) out += "," + convdetail::fmt_real(e.x0[a]);
            out += "," + std::to_string(e.c0Cells);
            if (!cSets.empty())
                for (size_t j = 0; j < cSets[i].size(); ++j)
                    out += "," + convdetail::fmt_real(static_cast<Real>(cSets[i][j].count()) * xcv);
            out += "\n";
        }
        return out;
    }
};

/* Family of convolution sets over a level grid and a theta grid.  Levels must
   lie in (0,1]; they are sorted ascending.  Pass an empty theta list to skip
   mask storage and keep only the per-level profile. */
inline ConvolutionSetFamily conv_family(const GridFunction& f, const GridFunction& g,
                                        std::vector<Real> tSamples,
                                        std::vector<Real> thetaSamples, int k) {
    convdetail::check_pair(f, g, "conv_family");
    if (tSamples.empty()) throw std::invalid_argument("conv_family: need at least one level");
    std::sort(tSamples.begin(), tSamples.end());
    if (!(tSamples.front() > 0.0) || tSamples.back() > 1.0)
        throw std::invalid_argument("conv_family: levels must lie in (0,1]");
    for (Real th : thetaSamples)
        if (th < 0.0 || th > 1.0)
            throw std::invalid_argument("conv_family: theta must lie in [0,1]");
    const int n = f.geom.dim;
    if (k != n && k != n - 1)
        throw std::invalid_argument("conv_family: k must be n or n-1");
    if (k < 1) throw std::invalid_argument("conv_family: k = n-1 needs a 2D grid");

    ConvolutionSetFamily fam;
    fam.kIndex = k;
    fam.tSamples = tSamples;
    fam.thetaSamples = thetaSamples;
    const size_t T = tSamples.size();
    fam.perT.resize(T);
    if (!thetaSamples.empty()) fam.cSets.resize(T);

    if (k == n) {
        std::vector<Real> logT(T);
        for (size_t i = 0; i < T; ++i) logT[i] = std::log(tSamples[i]);
        const std::vector<int32_t> counts = convdetail::level_counts(f, g, logT, fam.xGeom);
        const size_t X = static_cast<size_t>(fam.xGeom.size());
        const Real cv = f.geom.cell_volume();
        for (size_t ti = 0; ti < T; ++ti) {
            const int32_t* row = counts.data() + ti * X;
            FamilyEntry& e = fam.perT[ti];
            e.t = tSamples[ti];
            long arg = -1;
            int32_t best = 0;
            long nonEmpty = 0;
            for (size_t x = 0; x < X; ++x) {
                if (row[x] > 0) ++nonEmpty;
                if (row[x] > best) {
                    best = row[x];
                    arg = static_cast<long>(x);
                }
            }
            e.c0Cells = nonEmpty;
            if (arg < 0) {
                e.x0 = Vec(n);
                if (!thetaSamples.empty())
                    fam.cSets[ti].assign(thetaSamples.size(), Mask(fam.xGeom));
                continue;
            }
            e.mt = static_cast<Real>(best) * cv;
            e.x0 = fam.xGeom.point(arg);
            if (!thetaSamples.empty()) {
                const Real slack = 1e-9 * std::max(1.0, e.mt);
                for (Real th : thetaSamples) {
                    Mask m(fam.xGeom);
                    const Real cut = th * e.mt - slack;
                    for (size_t x = 0; x < X; ++x)
                        m.on[x] = row[x] > 0 && static_cast<Real>(row[x]) * cv >= cut ? 1 : 0;
                    fam.cSets[ti].push_back(std::move(m));
                }
            }
        }
        return fam;
    }

    fam.xGeom = griddetail::sum_geom(f.geom, g.geom);
    const Real base = f.sup_log() + g.sup_log();
    std::vector<Real> w1;
    for (size_t ti = 0; ti < T; ++ti) {
        convdetail::section_w1_profile(f, g, std::log(tSamples[ti]) + base - 1e-9, fam.xGeom, w1);
        FamilyEntry& e = fam.perT[ti];
        e.t = tSamples[ti];
        long arg = -1;
        Real best = -1.0;
        long nonEmpty = 0;
        for (size_t x = 0; x < w1.size(); ++x) {
            if (w1[x] >= 0.0) ++nonEmpty;
            if (w1[x] > best) {
                best = w1[x];
                arg = static_cast<long>(x);
            }
        }
        e.c0Cells = nonEmpty;
        if (arg < 0) {
            e.x0 = Vec(n);
            if (!thetaSamples.empty())
                fam.cSets[ti].assign(thetaSamples.size(), Mask(fam.xGeom));
            continue;
        }
        e.mt = best;
        e.x0 = fam.xGeom.point(arg);
        if (!thetaSamples.empty()) {
            const Real slack = 1e-9 * std::max(1.0, e.mt);
            for (Real th : thetaSamples) {
                Mask m(fam.xGeom);
                const Real cut = th * e.mt - slack;
                for (size_t x = 0; x < w1.size(); ++x)
                    m.on[x] = w1[x] >= 0.0 && w1[x] >= cut ? 1 : 0;
                fam.cSets[ti].push_back(std::move(m));
            }
        }
    }
    return fam;
}

/* W1 of a 2D grid function by the layer-cake formula: midpoint quadrature of
   W1(hull of the level mask) over levels s * sup f. */
inline Real w1_function(const GridFunction& f, int sSamples = 64) {
    if (f.geom.dim != 2) throw std::invalid_argument("w1_function: 2D grids only");
    if (sSamples < 1) throw std::invalid_argument("w1_function: need at least one level");
    const Real sup = f.sup_log();
    const long n0 = f.geom.shape[0], n1 = f.geom.shape[1];
    Real acc = 0.0;
    std::vector<Vec> pts;
    for (int j = 0; j < sSamples; ++j) {
        const Real s = (static_cast<Real>(j) + 0.5) / static_cast<Real>(sSamples);
        const Real thr = std::log(s) + sup - 1e-9;
        pts.clear();
        for (long i0 = 0; i0 < n0; ++i0) {
            long lo = -1, hi = -1;
            const Real* row = f.logv.data() + static_cast<size_t>(i0 * n1);
            for (long i1 = 0; i1 < n1; ++i1)
                if (row[i1] >= thr) {
                    if (lo < 0) lo = i1;
                    hi = i1;
                }
            if (lo < 0) continue;
            pts.push_back(f.geom.point({i0, lo, 0}));
            if (hi != lo) pts.push_back(f.geom.point({i0, hi, 0}));
        }
        acc += quermass_w1_of_points(2, pts);
    }
    return std::exp(sup) * acc / static_cast<Real>(sSamples);
}

struct CroftonResult {
    Real estimate = 0.0;
    Real standardError = 0.0;
    long samples = 0;
};

/* Monte Carlo W1 by random lines: uniform direction, offset uniform over the
   support's bounding disk of radius R, estimator pi * R * mean(line max).
   The indicator case reproduces W1 of the support hull.  Deterministic for a
   given seed: the RNG is keyed by sample index and partial sums reduce in
   fixed chunk order. */
inline CroftonResult crofton_w1(const GridFunction& f, long samples, uint64_t seed) {
    if (f.geom.dim != 2) throw std::invalid_argument("crofton_w1: 2D grids only");
    if (samples < 100) throw std::invalid_argument("crofton_w1: need at least 100 samples");

    Vec lo(2), hi(2);
    bool any = false;
    const long n0 = f.geom.shape[0], n1 = f.geom.shape[1];
    for (long i0 = 0; i0 < n0; ++i0)
        for (long i1 = 0; i1 < n1; ++i1) {
            if (f.logv[static_cast<size_t>(i0 * n1 + i1)] == kNegInf) continue;
            const Vec p = f.geom.point({i0, i1, 0});
            if (!any) {
                lo = p;
                hi = p;
                any = true;
            } else
                for (int a = 0; a < 2; ++a) {
                    lo[a] = std::min(lo[a], p[a]);
                    hi[a] = std::max(hi[a], p[a]);
                }
        }
    const Vec center = (lo + hi) * 0.5;
    const Real hmax = std::max(f.geom.spacing[0], f.geom.spacing[1]);
    Real R = hmax;
    for (long i0 = 0; i0 < n0; ++i0)
        for (long i1 = 0; i1 < n1; ++i1)
            if (f.logv[static_cast<size_t>(i0 * n1 + i1)] > kNegInf)
                R = std::max(R, norm(f.geom.point({i0, i1, 0}) - center) + hmax);

    const CounterRng rng{seed};
    const Real step = std::min(f.geom.spacing[0], f.geom.spacing[1]) / 2.0;
    const long nSteps = static_cast<long>(std::ceil(2.0 * R / step));
    struct Acc {
        Real s1 = 0.0, s2 = 0.0;
    };
    const Acc total = parallel_chunk_reduce<Acc>(
        samples, 0, Acc{},
        [&](long a, long b) {
            Acc loc;
            for (long i = a; i < b; ++i) {
                const Real phi = rng.uniform(static_cast<uint64_t>(i), 0, 0.0, M_PI);
                const Real off = rng.uniform(static_cast<uint64_t>(i), 1, -R, R);
                const Vec dir = Vec::of({std::cos(phi), std::sin(phi)});
                const Vec base = center + off * Vec::of({-std::sin(phi), std::cos(phi)});
                Real m = kNegInf;
                for (long q = 0; q <= nSteps; ++q) {
                    const Vec pt = base + (-R + static_cast<Real>(q) * step) * dir;
                    const std::array<long, 3> idx = f.geom.nearest(pt);
                    if (f.geom.in_range(idx))
                        m = std::max(m, f.logv[static_cast<size_t>(f.geom.flat(idx))]);
                }
                const Real v = m > kNegInf ? std::exp(m) : 0.0;
                loc.s1 += v;
                loc.s2 += v * v;
            }
            return loc;
        },
        [](Acc x, Acc y) {
            return Acc{x.s1 + y.s1, x.s2 + y.s2};
        });

    const Real mean = total.s1 / static_cast<Real>(samples);
    Real var = (total.s2 - static_cast<Real>(samples) * mean * mean) /
               static_cast<Real>(samples - 1);
    var = std::max(var, 0.0);
    CroftonResult r;
    r.estimate = M_PI * R * mean;
    r.standardError = M_PI * R * std::sqrt(var / static_cast<Real>(samples));
    r.samples = samples;
    return r;
}

struct SectionMax {
    Real value = 0.0;
    Vec x0;
};

/* Largest W1 of the product section z -> f(z) g(x0 - z) over the sum lattice,
   quadrature matching w1_function (levels relative to the section's own sup).
   Lex-smallest maximizer; candidates are the x0 with a nonempty section. */
inline SectionMax max_w1_section(const GridFunction& f, const GridFunction& g,
                                 int sSamples = 64) {
    convdetail::check_pair(f, g, "max_w1_section");
    if (f.geom.dim != 2) throw std::invalid_argument("max_w1_section: 2D grids only");
    if (sSamples < 1) throw std::invalid_argument("max_w1_section: need at least one level");
    const GridGeom xg = griddetail::sum_geom(f.geom, g.geom);
    const size_t X = static_cast<size_t>(xg.size());
    const long fn0 = f.geom.shape[0], fn1 = f.geom.shape[1];
    const long gn0 = g.geom.shape[0], gn1 = g.geom.shape[1];
    const long xn1 = xg.shape[1];
    const int S = sSamples;
    std::vector<Real> val(X, -1.0);

    parallel_chunk_reduce<int>(
        static_cast<long>(X), 0, 0,
        [&](long a, long b) {
            std::vector<Real> pbuf;
            std::vector<Real> thr(static_cast<size_t>(S));
            std::vector<long> colLo, colHi;
            std::vector<Vec> pts;
            for (long xf = a; xf < b; ++xf) {
                const long k0 = xf / xn1, k1 = xf % xn1;
                const long r0 = std::max(0L, k0 - (gn0 - 1)), r1 = std::min(fn0 - 1, k0);
                const long c0 = std::max(0L, k1 - (gn1 - 1)), c1 = std::min(fn1 - 1, k1);
                if (r0 > r1 || c0 > c1) continue;
                const long rows = r1 - r0 + 1, cols = c1 - c0 + 1;
                pbuf.assign(static_cast<size_t>(rows * cols), kNegInf);
                Real pmax = kNegInf;
                Real pmin = std::numeric_limits<Real>::infinity();
                for (long i0 = r0; i0 <= r1; ++i0) {
                    const Real* frow = f.logv.data() + static_cast<size_t>(i0 * fn1);
                    const Real* grow = g.logv.data() + static_cast<size_t>((k0 - i0) * gn1);
                    Real* prow = pbuf.data() + static_cast<size_t>((i0 - r0) * cols);
                    for (long i1 = c0; i1 <= c1; ++i1) {
                        const Real lf = frow[i1], lg = grow[k1 - i1];
                        if (lf == kNegInf || lg == kNegInf) continue;
                        const Real p = lf + lg;
                        prow[i1 - c0] = p;
                        pmax = std::max(pmax, p);
                        pmin = std::min(pmin, p);
                    }
                }
                if (pmax == kNegInf) continue;
                if (pmin == pmax) {
                    /* Flat product: every level set is the finite support,
                       so one hull settles all levels. */
                    pts.clear();
                    for (long ri = 0; ri < rows; ++ri) {
                        const Real* prow = pbuf.data() + static_cast<size_t>(ri * cols);
                        long lo = -1, hi = -1;
                        for (long ci = 0; ci < cols; ++ci)
                            if (prow[ci] != kNegInf) {
                                if (lo < 0) lo = ci;
                                hi = ci;
                            }
                        if (lo < 0) continue;
                        pts.push_back(f.geom.point({r0 + ri, c0 + lo, 0}));
                        if (hi != lo) pts.push_back(f.geom.point({r0 + ri, c0 + hi, 0}));
                    }
                    val[static_cast<size_t>(xf)] =
                        std::exp(pmax) * quermass_w1_of_points(2, pts);
                    continue;
                }
                for (int j = 0; j < S; ++j)
                    thr[static_cast<size_t>(j)] =
                        std::log((static_cast<Real>(j) + 0.5) / static_cast<Real>(S)) + pmax - 1e-9;
                /* Per row, bucket each cell into the highest level it clears,
                   then suffix-combine so level j sees the union of buckets
                   >= j; this walks the level grid once per row. */
                colLo.assign(static_cast<size_t>(rows * S), -1);
                colHi.assign(static_cast<size_t>(rows * S), -1);
                for (long ri = 0; ri < rows; ++ri) {
                    const Real* prow = pbuf.data() + static_cast<size_t>(ri * cols);
                    long* blo = colLo.data() + static_cast<size_t>(ri * S);
                    long* bhi = colHi.data() + static_cast<size_t>(ri * S);
                    for (long ci = 0; ci < cols; ++ci) {
                        const Real p = prow[ci];
                        if (p == kNegInf) continue;
                        auto it = std::upper_bound(thr.begin(), thr.end(), p);
                        if (it == thr.begin()) continue;
                        const long bi = static_cast<long>(it - thr.begin()) - 1;
                        if (blo[bi] < 0) blo[bi] = ci;
                        bhi[bi] = std::max(bhi[bi], ci);
                    }
                    for (int j = S - 2; j >= 0; --j) {
                        if (blo[j + 1] < 0) continue;
                        blo[j] = blo[j] < 0 ? blo[j + 1] : std::min(blo[j], blo[j + 1]);
                        bhi[j] = std::max(bhi[j], bhi[j + 1]);
                    }
                }
                /* Consecutive levels with identical row intervals share one
                   hull; a flat product (indicator pair) collapses to a
                   single hull evaluation. */
                Real acc = 0.0;
                Real levelW = 0.0;
                for (int j = 0; j < S; ++j) {
                    bool same = j > 0;
                    for (long ri = 0; same && ri < rows; ++ri) {
                        const size_t b = static_cast<size_t>(ri * S + j);
                        same = colLo[b] == colLo[b - 1] && colHi[b] == colHi[b - 1];
                    }
                    if (!same) {
                        pts.clear();
                        for (long ri = 0; ri < rows; ++ri) {
                            const long lo = colLo[static_cast<size_t>(ri * S + j)];
                            if (lo < 0) continue;
                            const long hi = colHi[static_cast<size_t>(ri * S + j)];
                            pts.push_back(f.geom.point({r0 + ri, c0 + lo, 0}));
                            if (hi != lo)
                                pts.push_back(f.geom.point({r0 + ri, c0 + hi, 0}));
                        }
                        levelW = quermass_w1_of_points(2, pts);
                    }
                    acc += levelW;
                }
                val[static_cast<size_t>(xf)] = std::exp(pmax) * acc / static_cast<Real>(S);
            }
            return 0;
        },
        [](int x, int) { return x; });

    SectionMax r;
    long arg = -1;
    Real best = -1.0;
    for (size_t i = 0; i < X; ++i)
        if (val[i] >= 0.0 && val[i] > best) {
            best = val[i];
            arg = static_cast<long>(i);
        }
    if (arg < 0) {
        r.x0 = Vec(2);
        return r;
    }
    r.value = best;
    r.x0 = xg.point(arg);
    return r;
}

/* Grid convexity up to slack: nodes strictly inside the hull of the mask's
   cell centers (deeper than the slack margin) must be on after a matching
   dilation.  Low-dimensional hulls pass by convention. */
inline bool mask_hull_convex(const Mask& m, int slackCells = 1) {
    if (m.count() == 0) return true;
    const Polytope h = hull_of_mask(m);
    if (!h.full_dim()) return true;
    const Mask dm = dilate(m, slackCells);
    Real hmax = 0.0;
    for (int a = 0; a < m.geom.dim; ++a) hmax = std::max(hmax, m.geom.spacing[a]);
    const Real margin = (static_cast<Real>(slackCells) + 0.5) * hmax;
    for (long i = 0; i < m.geom.size(); ++i) {
        if (dm.on[static_cast<size_t>(i)]) continue;
        if (h.contains(m.geom.point(i), -margin)) return false;
    }
    return true;
}

}  // namespace logconv
