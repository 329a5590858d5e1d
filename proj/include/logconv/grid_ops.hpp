#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "logconv/grid.hpp"
#include "logconv/parallel.hpp"
#include "logconv/vec.hpp"

namespace logconv {

namespace griddetail {

/* Output lattice of a (sup-)convolution: origins add, shapes sum minus one. */
inline GridGeom sum_geom(const GridGeom& a, const GridGeom& b) {
    if (a.dim != b.dim) throw std::invalid_argument("sum_geom: dimension mismatch");
    if (!a.same_spacing(b)) throw std::invalid_argument("sum_geom: spacing mismatch");
    GridGeom out = a;
    for (int i = 0; i < a.dim; ++i) {
        out.origin[i] = a.origin[i] + b.origin[i];
        out.shape[i] = a.shape[i] + b.shape[i] - 1;
    }
    return out;
}

inline std::vector<Real> linear_values(const GridFunction& f) {
    std::vector<Real> v(f.logv.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = f.logv[i] > kNegInf ? std::exp(f.logv[i]) : 0.0;
    return v;
}

} // namespace griddetail

/* f*g(x) = integral of f(z)g(x-z) dz by the midpoint rule: a full direct
   sum scaled by the cell volume.  Each output cell is accumulated by one
   worker in a fixed index order, so results do not depend on thread count. */
inline GridFunction convolve(const GridFunction& f, const GridFunction& g) {
    GridGeom out = griddetail::sum_geom(f.geom, g.geom);
    const std::vector<Real> vf = griddetail::linear_values(f);
    const std::vector<Real> vg = griddetail::linear_values(g);
    const Real cellVol = f.geom.cell_volume();
    const long a0 = f.geom.shape[0], b0 = g.geom.shape[0];
    const long a1 = f.geom.dim == 2 ? f.geom.shape[1] : 1;
    const long b1 = f.geom.dim == 2 ? g.geom.shape[1] : 1;
    const long o1 = f.geom.dim == 2 ? out.shape[1] : 1;
    std::vector<Real> lv(static_cast<size_t>(out.size()), kNegInf);
    parallel_for(out.shape[0], [&](long k0) {
        const long i0lo = std::max<long>(0, k0 - b0 + 1), i0hi = std::min(a0 - 1, k0);
        for (long k1 = 0; k1 < o1; ++k1) {
            const long i1lo = std::max<long>(0, k1 - b1 + 1), i1hi = std::min(a1 - 1, k1);
            Real acc = 0.0;
            for (long i0 = i0lo; i0 <= i0hi; ++i0) {
                const Real* rf = vf.data() + i0 * a1;
                const Real* rg = vg.data() + (k0 - i0) * b1 + (k1 - i1lo);
                Real rowAcc = 0.0;
                for (long i1 = i1lo; i1 <= i1hi; ++i1) rowAcc += rf[i1] * *rg--;
                acc += rowAcc;
            }
            if (acc > 0.0) lv[static_cast<size_t>(k0 * o1 + k1)] = std::log(acc * cellVol);
        }
    });
    return GridFunction(out, std::move(lv));
}

/* Asplund product f*g(x) = sup_z f(z)g(x-z), a max-plus sum in the log
   domain.  The sup of the output equals sup(f)*sup(g) exactly, and the
   support mask is exactly the index-sum of the operand supports. */
inline GridFunction asplund(const GridFunction& f, const GridFunction& g) {
    GridGeom out = griddetail::sum_geom(f.geom, g.geom);
    const long a0 = f.geom.shape[0], b0 = g.geom.shape[0];
    const long a1 = f.geom.dim == 2 ? f.geom.shape[1] : 1;
    const long b1 = f.geom.dim == 2 ? g.geom.shape[1] : 1;
    const long o1 = f.geom.dim == 2 ? out.shape[1] : 1;
    const Real top = f.sup_log() + g.sup_log();
    std::vector<Real> lv(static_cast<size_t>(out.size()), kNegInf);
    parallel_for(out.shape[0], [&](long k0) {
        const long i0lo = std::max<long>(0, k0 - b0 + 1), i0hi = std::min(a0 - 1, k0);
        for (long k1 = 0; k1 < o1; ++k1) {
            const long i1lo = std::max<long>(0, k1 - b1 + 1), i1hi = std::min(a1 - 1, k1);
            Real best = kNegInf;
            for (long i0 = i0lo; i0 <= i0hi && best < top; ++i0) {
                const Real* rf = f.logv.data() + i0 * a1;
                const Real* rg = g.logv.data() + (k0 - i0) * b1 + (k1 - i1lo);
                for (long i1 = i1lo; i1 <= i1hi; ++i1) {
                    Real lf = rf[i1], lg = *rg--;
                    if (lf > kNegInf && lg > kNegInf) best = std::max(best, lf + lg);
                    if (best >= top) break;
                }
            }
            lv[static_cast<size_t>(k0 * o1 + k1)] = best;
        }
    });
    return GridFunction(out, std::move(lv));
}

/* The maximizing z of f(z)g(x-z) at a sum-lattice node x, lexicographically
   smallest index on ties so repeated extractions are reproducible. */
inline Vec asplund_argmax(const GridFunction& f, const GridFunction& g, const Vec& x) {
    GridGeom out = griddetail::sum_geom(f.geom, g.geom);
    if (x.dim != out.dim) throw std::invalid_argument("asplund_argmax: dimension mismatch");
    std::array<long, 3> k{0, 0, 0};
    for (int i = 0; i < out.dim; ++i) {
        Real r = (x[i] - out.origin[i]) / out.spacing[i];
        k[i] = std::lround(r);
        if (std::abs(r - static_cast<Real>(k[i])) > 1e-6 || k[i] < 0 || k[i] >= out.shape[i])
            throw std::invalid_argument("asplund_argmax: x is not a sum-lattice node");
    }
    const long a1 = f.geom.dim == 2 ? f.geom.shape[1] : 1;
    const long b1 = f.geom.dim == 2 ? g.geom.shape[1] : 1;
    Real best = kNegInf;
    std::array<long, 3> bestIdx{-1, -1, -1};
    const long i0lo = std::max<long>(0, k[0] - g.geom.shape[0] + 1);
    const long i0hi = std::min(f.geom.shape[0] - 1, k[0]);
    const long i1lo = std::max<long>(0, k[1] - b1 + 1), i1hi = std::min(a1 - 1, k[1]);
    for (long i0 = i0lo; i0 <= i0hi; ++i0)
        for (long i1 = i1lo; i1 <= i1hi; ++i1) {
            Real lf = f.logv[static_cast<size_t>(i0 * a1 + i1)];
            Real lg = g.logv[static_cast<size_t>((k[0] - i0) * b1 + (k[1] - i1))];
            if (lf > kNegInf && lg > kNegInf && lf + lg > best) {
                best = lf + lg;
                bestIdx = {i0, i1, 0};
            }
        }
    if (best == kNegInf) throw std::domain_error("asplund_argmax: x outside the support sum");
    return f.geom.point(bestIdx);
}

/* f (+) g(z) = sqrt(f*g(2z)) on the half lattice: same node count as the
   Asplund product, origin and spacing halved, log-values halved.  The
   identity (f (+) g)(z)^2 = f*g(2z) is exact cell for cell. */
inline GridFunction oplus(const GridFunction& f, const GridFunction& g) {
    GridFunction h = asplund(f, g);
    GridGeom geom = h.geom;
    for (int i = 0; i < geom.dim; ++i) {
        geom.origin[i] = 0.5 * h.geom.origin[i];
        geom.spacing[i] = 0.5 * h.geom.spacing[i];
    }
    std::vector<Real> lv(h.logv.size());
    for (size_t i = 0; i < lv.size(); ++i) lv[i] = 0.5 * h.logv[i];
    return GridFunction(geom, std::move(lv));
}

/* Difference function: the midpoint product of f with its reflection. */
inline GridFunction diff_function(const GridFunction& f) { return oplus(f, reflect(f)); }

/* Potential on a lattice, u = -log f convention: finite inside the domain,
   +inf outside.  The lattice carries the node positions. */
struct Potential {
    GridGeom geom;
    std::vector<Real> v;

    Potential() = default;
    Potential(GridGeom g, std::vector<Real> vals) : geom(g), v(std::move(vals)) {
        if (static_cast<long>(v.size()) != geom.size())
            throw std::invalid_argument("Potential: value count does not match shape");
        bool finite = false;
        for (Real x : v) {
            if (std::isnan(x) || (x < kPosInf && !std::isfinite(x)))
                throw std::invalid_argument("Potential: values must be finite or +inf");
            finite = finite || x < kPosInf;
        }
        if (!finite) throw std::invalid_argument("Potential: empty domain");
    }
};

namespace griddetail {

/* Finite window [a,b] of a line; false when the finite cells are not one
   contiguous run or the run violates discrete convexity (second differences
   are compared exactly; near-ties fall back to the safe path). */
inline bool line_convex_window(const std::vector<Real>& v, long& a, long& b) {
    const long n = static_cast<long>(v.size());
    a = 0;
    while (a < n && v[static_cast<size_t>(a)] == kPosInf) ++a;
    if (a == n) { b = a - 1; return true; } // empty line: trivially fine
    b = n - 1;
    while (v[static_cast<size_t>(b)] == kPosInf) --b;
    for (long i = a; i <= b; ++i)
        if (v[static_cast<size_t>(i)] == kPosInf) return false;
    for (long i = a; i + 2 <= b; ++i)
        if (v[static_cast<size_t>(i + 2)] - v[static_cast<size_t>(i + 1)] <
            v[static_cast<size_t>(i + 1)] - v[static_cast<size_t>(i)])
            return false;
    return true;
}

/* max_i s*x_i - v_i over the finite window, climbing a single pointer: for a
   convex line the leftmost argmax is nondecreasing in s. */
inline void conj_line_fast(Real origin, Real h, const std::vector<Real>& v, long a, long b,
                           const std::vector<Real>& svals, std::vector<Real>& out) {
    long p = a;
    auto val = [&](Real s, long i) { return s * (origin + h * static_cast<Real>(i)) - v[static_cast<size_t>(i)]; };
    for (size_t j = 0; j < svals.size(); ++j) {
        Real s = svals[j];
        while (p < b && val(s, p + 1) > val(s, p)) ++p;
        out[j] = val(s, p);
    }
}

inline void conj_line_brute(Real origin, Real h, const std::vector<Real>& v,
                            const std::vector<Real>& svals, std::vector<Real>& out) {
    for (size_t j = 0; j < svals.size(); ++j) {
        Real s = svals[j], best = kNegInf;
        for (size_t i = 0; i < v.size(); ++i) {
            if (v[i] == kPosInf) continue;
            best = std::max(best, s * (origin + h * static_cast<Real>(i)) - v[i]);
        }
        out[j] = best;
    }
}

/* One 1D conjugate pass: -inf output marks an all-+inf line.  Returns true
   when the monotone fast path was used. */
inline bool conj_line(Real origin, Real h, const std::vector<Real>& v,
                      const std::vector<Real>& svals, std::vector<Real>& out) {
    out.assign(svals.size(), kNegInf);
    long a, b;
    if (line_convex_window(v, a, b)) {
        if (a <= b) conj_line_fast(origin, h, v, a, b, svals, out);
        return true;
    }
    conj_line_brute(origin, h, v, svals, out);
    return false;
}

inline std::vector<Real> axis_nodes(const GridGeom& g, int axis) {
    std::vector<Real> s(static_cast<size_t>(g.shape[axis]));
    for (long i = 0; i < g.shape[axis]; ++i)
        s[static_cast<size_t>(i)] = g.origin[axis] + g.spacing[axis] * static_cast<Real>(i);
    return s;
}

} // namespace griddetail

struct LegendreResult {
    Potential star;
    bool fallback = false; // true when some line was not convex and the dense scan ran
};

/* Discrete conjugate u*(s) = max_x <s,x> - u(x) on the lattice sgeom,
   factored one axis at a time.  Each line uses the monotone-argmax fast path
   when it is convex and falls back to the dense scan otherwise, in which
   case the fallback flag is raised. */
inline LegendreResult legendre(const Potential& u, const GridGeom& sgeom) {
    if (sgeom.dim != u.geom.dim) throw std::invalid_argument("legendre: dimension mismatch");
    bool fell = false;
    if (u.geom.dim == 1) {
        std::vector<Real> svals = griddetail::axis_nodes(sgeom, 0);
        std::vector<Real> out;
        fell = !griddetail::conj_line(u.geom.origin[0], u.geom.spacing[0], u.v, svals, out);
        return LegendreResult{Potential(sgeom, std::move(out)), fell};
    }
    const long n0 = u.geom.shape[0], n1 = u.geom.shape[1];
    const long s0 = sgeom.shape[0], s1 = sgeom.shape[1];
    std::vector<Real> s0vals = griddetail::axis_nodes(sgeom, 0);
    std::vector<Real> s1vals = griddetail::axis_nodes(sgeom, 1);
    // pass 1: conjugate along axis 1 for each x0 row
    std::vector<Real> mid(static_cast<size_t>(n0 * s1));
    std::vector<Real> row(static_cast<size_t>(n1)), conj(static_cast<size_t>(s1));
    for (long i = 0; i < n0; ++i) {
        for (long j = 0; j < n1; ++j) row[static_cast<size_t>(j)] = u.v[static_cast<size_t>(i * n1 + j)];
        if (!griddetail::conj_line(u.geom.origin[1], u.geom.spacing[1], row, s1vals, conj)) fell = true;
        for (long j = 0; j < s1; ++j) mid[static_cast<size_t>(i * s1 + j)] = conj[static_cast<size_t>(j)];
    }
    // pass 2: the column -mid(., s1) is again a potential (+inf where the row
    // was empty); conjugate it along axis 0
    std::vector<Real> out(static_cast<size_t>(s0 * s1));
    std::vector<Real> col(static_cast<size_t>(n0)), conj0(static_cast<size_t>(s0));
    for (long j = 0; j < s1; ++j) {
        for (long i = 0; i < n0; ++i) {
            Real m = mid[static_cast<size_t>(i * s1 + j)];
            col[static_cast<size_t>(i)] = m > kNegInf ? -m : kPosInf;
        }
        if (!griddetail::conj_line(u.geom.origin[0], u.geom.spacing[0], col, s0vals, conj0)) fell = true;
        for (long i = 0; i < s0; ++i) out[static_cast<size_t>(i * s1 + j)] = conj0[static_cast<size_t>(i)];
    }
    return LegendreResult{Potential(sgeom, std::move(out)), fell};
}

/* Default conjugate lattice: the discrete slope range of u per axis, with as
   many nodes as the input axis. */
inline LegendreResult legendre(const Potential& u) {
    GridGeom sg = u.geom;
    for (int ax = 0; ax < u.geom.dim; ++ax) {
        Real lo = kPosInf, hi = kNegInf;
        const long stride = (ax == 0 && u.geom.dim == 2) ? u.geom.shape[1] : 1;
        const long nAx = u.geom.shape[ax];
        const long nOther = u.geom.dim == 2 ? u.geom.shape[1 - ax] : 1;
        const long strideOther = (ax == 0) ? 1 : (u.geom.dim == 2 ? u.geom.shape[1] : 1);
        for (long o = 0; o < nOther; ++o)
            for (long i = 0; i + 1 < nAx; ++i) {
                Real va = u.v[static_cast<size_t>(o * strideOther + i * stride)];
                Real vb = u.v[static_cast<size_t>(o * strideOther + (i + 1) * stride)];
                if (va == kPosInf || vb == kPosInf) continue;
                Real slope = (vb - va) / u.geom.spacing[ax];
                lo = std::min(lo, slope);
                hi = std::max(hi, slope);
            }
        if (!(lo < kPosInf)) { lo = -1.0; hi = 1.0; } // single-node axis: any window
        if (hi - lo < 1e-12) { lo -= 0.5; hi += 0.5; }
        long count = std::max<long>(2, u.geom.shape[ax]);
        sg.origin[ax] = lo;
        sg.spacing[ax] = (hi - lo) / static_cast<Real>(count - 1);
        sg.shape[ax] = count;
    }
    return legendre(u, sg);
}

struct InfConv {
    Potential w;
    bool viaConjugates = false; // false when a non-convex operand forced the direct scan
};

/* Infimal convolution w(x) = min_y u(y) + v(x-y) on the sum lattice.  For
   convex operands the conjugate route is exact: w = (u* + v*)* and the outer
   max over slopes is attained at a breakpoint, so it is evaluated on the
   merged slope set of the operands.  Non-convex operands use the direct
   min-plus scan instead (still exact on the lattice) and clear the flag. */
inline InfConv legendre_inf_conv(const Potential& u, const Potential& v) {
    if (u.geom.dim != 1 || v.geom.dim != 1)
        throw std::invalid_argument("legendre_inf_conv: one-dimensional potentials only");
    if (!u.geom.same_spacing(v.geom)) throw std::invalid_argument("legendre_inf_conv: spacing mismatch");
    const Real h = u.geom.spacing[0];
    GridGeom outGeom(1, Vec(1, u.geom.origin[0] + v.geom.origin[0]), {h, 0, 0},
                     {u.geom.shape[0] + v.geom.shape[0] - 1, 1, 1});
    const long n = outGeom.shape[0];
    long au, bu, av, bv;
    bool convex = griddetail::line_convex_window(u.v, au, bu) && griddetail::line_convex_window(v.v, av, bv);
    std::vector<Real> w(static_cast<size_t>(n), kPosInf);
    if (!convex) {
        for (long i = 0; i < u.geom.shape[0]; ++i) {
            if (u.v[static_cast<size_t>(i)] == kPosInf) continue;
            for (long j = 0; j < v.geom.shape[0]; ++j) {
                if (v.v[static_cast<size_t>(j)] == kPosInf) continue;
                Real s = u.v[static_cast<size_t>(i)] + v.v[static_cast<size_t>(j)];
                w[static_cast<size_t>(i + j)] = std::min(w[static_cast<size_t>(i + j)], s);
            }
        }
        return InfConv{Potential(outGeom, std::move(w)), false};
    }
    auto slopes = [&](const Potential& p, long a, long b) {
        std::vector<Real> s;
        for (long i = a; i < b; ++i)
            s.push_back((p.v[static_cast<size_t>(i + 1)] - p.v[static_cast<size_t>(i)]) / h);
        return s; // nondecreasing by convexity
    };
    std::vector<Real> su = slopes(u, au, bu), sv = slopes(v, av, bv), S;
    std::merge(su.begin(), su.end(), sv.begin(), sv.end(), std::back_inserter(S));
    // duplicate slopes would break the concavity of t -> phi(k, t) as a
    // sequence (zero-width plateaus), stalling the climb below
    S.erase(std::unique(S.begin(), S.end()), S.end());
    const long klo = au + av, khi = bu + bv;
    if (S.empty()) { // both operands are single nodes
        w[static_cast<size_t>(klo)] = u.v[static_cast<size_t>(au)] + v.v[static_cast<size_t>(av)];
        return InfConv{Potential(outGeom, std::move(w)), true};
    }
    std::vector<Real> ustar(S.size()), vstar(S.size());
    griddetail::conj_line_fast(u.geom.origin[0], h, u.v, au, bu, S, ustar);
    griddetail::conj_line_fast(v.geom.origin[0], h, v.v, av, bv, S, vstar);
    auto phi = [&](long k, size_t t) {
        Real x = outGeom.origin[0] + h * static_cast<Real>(k);
        return S[t] * x - ustar[t] - vstar[t];
    };
    size_t t = 0;
    for (long k = klo; k <= khi; ++k) {
        while (t + 1 < S.size() && phi(k, t + 1) > phi(k, t)) ++t;
        w[static_cast<size_t>(k)] = phi(k, t);
    }
    return InfConv{Potential(outGeom, std::move(w)), true};
}

} // namespace logconv
