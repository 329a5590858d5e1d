#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "logconv/grid.hpp"
#include "logconv/parallel.hpp"
#include "logconv/vec.hpp"

namespace logconv {

inline constexpr Real kSnap = 1e-12;   // coordinate snap toward zero
inline constexpr Real kGeomTol = 1e-9; // representation consistency tolerance

/* Closed halfspace {x : normal.x <= offset}, normal kept unit length. */
struct Halfspace {
    Vec normal;
    Real offset = 0.0;
};

namespace detail {

inline Real snap(Real x) { return std::abs(x) < kSnap ? 0.0 : x; }
inline Vec snap(Vec v) {
    for (int i = 0; i < v.dim; ++i) v[i] = snap(v[i]);
    return v;
}

inline Real scale_of(const std::vector<Vec>& pts) {
    Real s = 1.0;
    for (const Vec& p : pts)
        for (int i = 0; i < p.dim; ++i) s = std::max(s, std::abs(p[i]));
    return s;
}

inline std::vector<Vec> dedupe(std::vector<Vec> pts, Real tol) {
    std::sort(pts.begin(), pts.end(), lex_less);
    std::vector<Vec> out;
    for (const Vec& p : pts) {
        bool dup = false;
        for (const Vec& q : out)
            if (dist_inf(p, q) <= tol) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(p);
    }
    return out;
}

inline Real cross2(const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/* Monotone chain, CCW, strict turns (collinear middles dropped).  Degenerate
   inputs collapse to a segment or a point. */
inline std::vector<Vec> hull2d(std::vector<Vec> pts) {
    Real scale = scale_of(pts);
    pts = dedupe(std::move(pts), 1e-9 * scale);
    if (pts.size() <= 2) return pts;
    Real eps = 1e-12 * scale * scale;
    std::vector<Vec> h(2 * pts.size());
    size_t k = 0;
    for (const Vec& p : pts) { // lower
        while (k >= 2 && cross2(h[k - 2], h[k - 1], p) <= eps) --k;
        h[k++] = p;
    }
    size_t lower = k + 1;
    for (size_t i = pts.size() - 1; i-- > 0;) { // upper
        const Vec& p = pts[i];
        while (k >= lower && cross2(h[k - 2], h[k - 1], p) <= eps) --k;
        h[k++] = p;
    }
    h.resize(k - 1);
    if (h.size() == 2 && dist_inf(h[0], h[1]) <= 1e-9 * scale) h.resize(1);
    return h;
}

inline int affine_rank(const std::vector<Vec>& pts, Real tol) {
    if (pts.size() <= 1) return 0;
    std::vector<Vec> basis;
    for (size_t i = 1; i < pts.size(); ++i) {
        Vec d = pts[i] - pts[0];
        for (const Vec& b : basis) d = d - b * dot(d, b);
        Real n = norm(d);
        if (n > tol) basis.push_back(d * (1.0 / n));
        if (static_cast<int>(basis.size()) == pts[0].dim) break;
    }
    return static_cast<int>(basis.size());
}

struct Facet3 {
    Vec normal; // unit, outward
    Real offset;
    std::vector<Vec> cycle; // CCW viewed from outside
};

/* Brute-force facet enumeration: every point triple whose plane supports the
   point set contributes a facet.  Quadratic sizes here are tiny (Minkowski
   sums of single-digit vertex sets), so robustness wins over asymptotics. */
inline std::vector<Facet3> facets3d(const std::vector<Vec>& pts) {
    Real scale = scale_of(pts);
    Real sideTol = 1e-9 * scale;
    std::vector<Facet3> facets;
    auto have_plane = [&](const Vec& n, Real b) {
        for (const Facet3& f : facets)
            if (dot(f.normal, n) > 1.0 - 1e-9 && std::abs(f.offset - b) <= sideTol) return true;
        return false;
    };
    const size_t m = pts.size();
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            for (size_t k = j + 1; k < m; ++k) {
                Vec n = cross(pts[j] - pts[i], pts[k] - pts[i]);
                Real ln = norm(n);
                if (ln <= 1e-12 * scale * scale) continue;
                n = n * (1.0 / ln);
                Real b = dot(n, pts[i]);
                Real lo = 0.0, hi = 0.0;
                for (const Vec& p : pts) {
                    Real s = dot(n, p) - b;
                    lo = std::min(lo, s);
                    hi = std::max(hi, s);
                }
                for (int sign = 0; sign < 2; ++sign) {
                    Vec nn = sign ? -n : n;
                    Real bb = sign ? -b : b;
                    Real out = sign ? -lo : hi;
                    if (out > sideTol) continue;
                    if (have_plane(nn, bb)) continue;
                    // collect boundary points, order CCW in-plane
                    std::vector<Vec> onPlane;
                    for (const Vec& p : pts)
                        if (std::abs(dot(nn, p) - bb) <= sideTol) onPlane.push_back(p);
                    int axis = 0;
                    for (int a = 1; a < 3; ++a)
                        if (std::abs(nn[a]) < std::abs(nn[axis])) axis = a;
                    Vec u(3);
                    u[axis] = 1.0;
                    u = u - nn * dot(u, nn);
                    u = u * (1.0 / norm(u));
                    Vec v = cross(nn, u);
                    std::vector<Vec> flat;
                    flat.reserve(onPlane.size());
                    for (const Vec& p : onPlane) flat.push_back(Vec(2, dot(p, u), dot(p, v)));
                    std::vector<Vec> cyc2 = hull2d(flat);
                    if (cyc2.size() < 3) continue;
                    std::vector<Vec> cyc;
                    for (const Vec& q : cyc2) {
                        // lift back by matching the projected coordinates
                        size_t bi = 0;
                        Real bd = kPosInf;
                        for (size_t t = 0; t < onPlane.size(); ++t) {
                            Real d = std::abs(dot(onPlane[t], u) - q[0]) + std::abs(dot(onPlane[t], v) - q[1]);
                            if (d < bd) {
                                bd = d;
                                bi = t;
                            }
                        }
                        cyc.push_back(onPlane[bi]);
                    }
                    facets.push_back(Facet3{nn, bb, std::move(cyc)});
                }
            }
    return facets;
}

inline std::optional<Vec> solve2(const Halfspace& a, const Halfspace& b, Real scale) {
    Real det = a.normal[0] * b.normal[1] - a.normal[1] * b.normal[0];
    if (std::abs(det) <= 1e-10) return std::nullopt;
    Vec x(2);
    x[0] = (a.offset * b.normal[1] - b.offset * a.normal[1]) / det;
    x[1] = (a.normal[0] * b.offset - b.normal[0] * a.offset) / det;
    (void)scale;
    return x;
}

inline std::optional<Vec> solve3(const Halfspace& a, const Halfspace& b, const Halfspace& c) {
    Vec r0 = a.normal, r1 = b.normal, r2 = c.normal;
    Real det = dot(r0, cross(r1, r2));
    if (std::abs(det) <= 1e-10) return std::nullopt;
    Vec x = (cross(r1, r2) * a.offset + cross(r2, r0) * b.offset + cross(r0, r1) * c.offset) * (1.0 / det);
    x.dim = 3;
    return x;
}

} // namespace detail

/* Convex polytope in dimension 1..3 carrying both representations.
   Vertices: 1D = {lo,hi}; 2D = CCW cycle from the lex-smallest vertex;
   3D = lex-sorted extreme points plus facet cycles.  Halfspaces have unit
   normals and are lex-sorted.  The empty set is a valid value.  Degenerate
   (not full-dimensional) polytopes keep vertices but no facet list. */
class Polytope {
  public:
    Polytope() = default;

    static Polytope empty_set(int dim) {
        Polytope p;
        p.dim_ = dim;
        p.empty_ = true;
        return p;
    }

    static Polytope from_points(int dim, std::vector<Vec> pts) {
        for (Vec& p : pts) {
            if (p.dim != dim) throw std::invalid_argument("Polytope: point dimension mismatch");
            p = detail::snap(p);
        }
        Polytope poly;
        poly.dim_ = dim;
        if (pts.empty()) {
            poly.empty_ = true;
            return poly;
        }
        Real scale = detail::scale_of(pts);
        if (dim == 1) {
            Real lo = kPosInf, hi = kNegInf;
            for (const Vec& p : pts) {
                lo = std::min(lo, p[0]);
                hi = std::max(hi, p[0]);
            }
            poly.fullDim_ = hi - lo > 1e-9 * scale;
            if (poly.fullDim_) {
                poly.verts_ = {Vec(1, lo), Vec(1, hi)};
                poly.faces_ = {{Vec(1, -1.0), -lo}, {Vec(1, 1.0), hi}};
            } else {
                poly.verts_ = {Vec(1, lo)};
            }
        } else if (dim == 2) {
            std::vector<Vec> h = detail::hull2d(pts);
            poly.verts_ = h;
            poly.fullDim_ = h.size() >= 3;
            if (poly.fullDim_) {
                for (size_t i = 0; i < h.size(); ++i) {
                    const Vec& a = h[i];
                    const Vec& b = h[(i + 1) % h.size()];
                    Vec d = b - a;
                    Vec n(2, d[1], -d[0]); // outward for CCW
                    n = n * (1.0 / norm(n));
                    poly.faces_.push_back({n, dot(n, a)});
                }
                poly.rotate_to_lex_start();
                poly.sort_faces();
            }
        } else {
            std::vector<Vec> uniq = detail::dedupe(pts, 1e-9 * scale);
            int rank = detail::affine_rank(uniq, 1e-9 * scale);
            poly.fullDim_ = rank == 3;
            if (!poly.fullDim_) {
                poly.verts_ = uniq; // keep the set; facial structure unused
            } else {
                auto facets = detail::facets3d(uniq);
                std::vector<Vec> vs;
                for (const auto& f : facets)
                    for (const Vec& p : f.cycle) vs.push_back(p);
                poly.verts_ = detail::dedupe(vs, 1e-9 * scale);
                poly.facets3_ = std::move(facets);
                for (const auto& f : poly.facets3_) poly.faces_.push_back({f.normal, f.offset});
                poly.sort_faces();
            }
        }
        return poly;
    }

    /* Vertex enumeration.  Precondition: the feasible set is bounded. */
    static Polytope from_halfspaces(int dim, const std::vector<Halfspace>& hsIn) {
        std::vector<Halfspace> hs;
        for (Halfspace h : hsIn) {
            if (h.normal.dim != dim) throw std::invalid_argument("Polytope: halfspace dimension mismatch");
            Real n = norm(h.normal);
            if (n <= 1e-14) throw std::invalid_argument("Polytope: zero normal");
            h.normal = h.normal * (1.0 / n);
            h.offset /= n;
            hs.push_back(h);
        }
        Real bscale = 1.0;
        for (const auto& h : hs) bscale = std::max(bscale, std::abs(h.offset));
        Real feasTol = 1e-9 * bscale;
        auto feasible = [&](const Vec& x) {
            for (const auto& h : hs)
                if (dot(h.normal, x) > h.offset + feasTol) return false;
            return true;
        };
        std::vector<Vec> cand;
        if (dim == 1) {
            Real lo = kNegInf, hi = kPosInf;
            for (const auto& h : hs) {
                if (h.normal[0] > 0) hi = std::min(hi, h.offset / h.normal[0]);
                else lo = std::max(lo, h.offset / h.normal[0]);
            }
            if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("Polytope: unbounded halfspace set");
            if (lo <= hi + feasTol) {
                cand.push_back(Vec(1, lo));
                cand.push_back(Vec(1, hi));
            }
        } else if (dim == 2) {
            for (size_t i = 0; i < hs.size(); ++i)
                for (size_t j = i + 1; j < hs.size(); ++j)
                    if (auto x = detail::solve2(hs[i], hs[j], bscale))
                        if (feasible(*x)) cand.push_back(*x);
        } else {
            for (size_t i = 0; i < hs.size(); ++i)
                for (size_t j = i + 1; j < hs.size(); ++j)
                    for (size_t k = j + 1; k < hs.size(); ++k)
                        if (auto x = detail::solve3(hs[i], hs[j], hs[k]))
                            if (feasible(*x)) cand.push_back(*x);
        }
        if (cand.empty()) return Polytope::empty_set(dim);
        return Polytope::from_points(dim, cand);
    }

    int dim() const { return dim_; }
    bool is_empty() const { return empty_; }
    bool full_dim() const { return !empty_ && fullDim_; }
    const std::vector<Vec>& vertices() const { return verts_; }
    const std::vector<Halfspace>& halfspaces() const { return faces_; }

    Real volume() const {
        if (empty_ || !fullDim_) return 0.0;
        if (dim_ == 1) return verts_[1][0] - verts_[0][0];
        if (dim_ == 2) {
            Real a = 0.0;
            for (size_t i = 0; i < verts_.size(); ++i) {
                const Vec& p = verts_[i];
                const Vec& q = verts_[(i + 1) % verts_.size()];
                a += p[0] * q[1] - q[0] * p[1];
            }
            return 0.5 * a;
        }
        Real v = 0.0;
        for (const auto& f : facets3_)
            for (size_t i = 1; i + 1 < f.cycle.size(); ++i)
                v += dot(f.cycle[0], cross(f.cycle[i], f.cycle[i + 1])) / 6.0;
        return v;
    }

    /* Facet measure: 2 boundary points in 1D, perimeter in 2D, area in 3D. */
    Real surface_area() const {
        if (empty_ || !fullDim_) throw std::invalid_argument("surface_area: polytope is not full-dimensional");
        if (dim_ == 1) return 2.0;
        if (dim_ == 2) {
            Real s = 0.0;
            for (size_t i = 0; i < verts_.size(); ++i)
                s += norm(verts_[(i + 1) % verts_.size()] - verts_[i]);
            return s;
        }
        Real s = 0.0;
        for (const auto& f : facets3_)
            for (size_t i = 1; i + 1 < f.cycle.size(); ++i)
                s += 0.5 * norm(cross(f.cycle[i] - f.cycle[0], f.cycle[i + 1] - f.cycle[0]));
        return s;
    }

    Real quermass_w1() const { return surface_area() / static_cast<Real>(dim_); }

    Real support(const Vec& u) const {
        if (empty_) throw std::invalid_argument("support: empty polytope");
        Real m = kNegInf;
        for (const Vec& v : verts_) m = std::max(m, dot(u, v));
        return m;
    }

    bool contains(const Vec& x, Real tol = kGeomTol) const {
        if (empty_) return false;
        if (fullDim_) {
            for (const auto& h : faces_)
                if (dot(h.normal, x) > h.offset + tol) return false;
            return true;
        }
        if (verts_.size() == 1) return dist_inf(x, verts_[0]) <= tol;
        if (dim_ >= 2 && verts_.size() == 2) { // segment
            Vec d = verts_[1] - verts_[0];
            Real t = dot(x - verts_[0], d) / norm2(d);
            t = std::clamp(t, 0.0, 1.0);
            return norm(x - (verts_[0] + d * t)) <= tol;
        }
        return false; // degenerate planar sets in 3D: unsupported membership
    }

    Polytope translated(const Vec& t) const {
        Polytope p = *this;
        for (Vec& v : p.verts_) v = detail::snap(v + t);
        for (Halfspace& h : p.faces_) h.offset += dot(h.normal, t);
        for (auto& f : p.facets3_) {
            f.offset += dot(f.normal, t);
            for (Vec& v : f.cycle) v = detail::snap(v + t);
        }
        return p;
    }

    /* Dilation about the origin; negative factors flip orientation, so the
       result is rebuilt from scaled vertices. */
    Polytope scaled(Real s) const {
        if (empty_) return *this;
        if (s == 0.0) {
            std::vector<Vec> z{Vec(dim_)};
            return Polytope::from_points(dim_, z);
        }
        std::vector<Vec> vs = verts_;
        for (Vec& v : vs) v = v * s;
        return Polytope::from_points(dim_, vs);
    }

    Polytope reflected() const { return scaled(-1.0); }

    Vec vertex_mean() const {
        if (empty_) throw std::invalid_argument("vertex_mean: empty polytope");
        Vec c(dim_);
        for (const Vec& v : verts_) c = c + v;
        return c * (1.0 / static_cast<Real>(verts_.size()));
    }

    Box bbox() const {
        if (empty_) throw std::invalid_argument("bbox: empty polytope");
        return bounding_box(verts_);
    }

    bool is_centrally_symmetric(Real tol = kGeomTol) const {
        if (empty_) return false;
        Vec c = vertex_mean();
        for (const Vec& v : verts_) {
            Vec m = c * 2.0 - v;
            bool hit = false;
            for (const Vec& w : verts_)
                if (dist_inf(m, w) <= tol) {
                    hit = true;
                    break;
                }
            if (!hit) return false;
        }
        return true;
    }

    /* Both representations describe the same set within tol. */
    bool representations_consistent(Real tol = kGeomTol) const {
        if (empty_ || !fullDim_) return true;
        for (const Vec& v : verts_)
            for (const auto& h : faces_)
                if (dot(h.normal, v) > h.offset + tol) return false;
        for (const auto& h : faces_) { // each face touches the vertex set
            Real m = kNegInf;
            for (const Vec& v : verts_) m = std::max(m, dot(h.normal, v));
            if (std::abs(m - h.offset) > tol) return false;
        }
        return true;
    }

  private:
    void rotate_to_lex_start() {
        if (verts_.size() < 2) return;
        size_t best = 0;
        for (size_t i = 1; i < verts_.size(); ++i)
            if (lex_less(verts_[i], verts_[best])) best = i;
        std::rotate(verts_.begin(), verts_.begin() + static_cast<long>(best), verts_.end());
        // faces were built from the pre-rotation cycle; rebuild order only
    }
    void sort_faces() {
        std::sort(faces_.begin(), faces_.end(), [](const Halfspace& a, const Halfspace& b) {
            if (lex_less(a.normal, b.normal)) return true;
            if (lex_less(b.normal, a.normal)) return false;
            return a.offset < b.offset;
        });
    }

    int dim_ = 0;
    bool empty_ = false;
    bool fullDim_ = false;
    std::vector<Vec> verts_;
    std::vector<Halfspace> faces_;
    std::vector<detail::Facet3> facets3_;
};

inline Polytope minkowski_sum(const Polytope& P, const Polytope& Q) {
    if (P.dim() != Q.dim()) throw std::invalid_argument("minkowski_sum: dimension mismatch");
    if (P.is_empty() || Q.is_empty()) return Polytope::empty_set(P.dim());
    std::vector<Vec> sums;
    sums.reserve(P.vertices().size() * Q.vertices().size());
    for (const Vec& p : P.vertices())
        for (const Vec& q : Q.vertices()) sums.push_back(p + q);
    return Polytope::from_points(P.dim(), sums);
}

inline Polytope intersect(const Polytope& P, const Polytope& Q) {
    if (P.dim() != Q.dim()) throw std::invalid_argument("intersect: dimension mismatch");
    if (P.is_empty() || Q.is_empty()) return Polytope::empty_set(P.dim());
    if (!P.full_dim() || !Q.full_dim())
        throw std::invalid_argument("intersect: operands must be full-dimensional");
    std::vector<Halfspace> hs = P.halfspaces();
    hs.insert(hs.end(), Q.halfspaces().begin(), Q.halfspaces().end());
    return Polytope::from_halfspaces(P.dim(), hs);
}

inline Polytope convex_hull_union(const Polytope& P, const Polytope& Q) {
    if (P.dim() != Q.dim()) throw std::invalid_argument("convex_hull_union: dimension mismatch");
    std::vector<Vec> pts = P.vertices();
    pts.insert(pts.end(), Q.vertices().begin(), Q.vertices().end());
    if (pts.empty()) return Polytope::empty_set(P.dim());
    return Polytope::from_points(P.dim(), pts);
}

/* Polar body {y : <x,y> <= 1 on K}.  Requires the origin strictly interior.
   Vertices of the polar are facet normals over offsets and vice versa, so the
   double polar reproduces K to representation tolerance. */
inline Polytope polar(const Polytope& P) {
    if (!P.full_dim()) throw std::invalid_argument("polar: polytope is not full-dimensional");
    for (const auto& h : P.halfspaces())
        if (h.offset <= kGeomTol) throw std::invalid_argument("polar: origin is not interior");
    std::vector<Vec> pts;
    pts.reserve(P.halfspaces().size());
    for (const auto& h : P.halfspaces()) pts.push_back(h.normal * (1.0 / h.offset));
    return Polytope::from_points(P.dim(), pts);
}

/* Hull of the on-nodes of a mask (their cell centers).  Row endpoints carry
   the hull, so only those are fed to the hull construction. */
inline std::vector<Vec> mask_hull_points(const Mask& m) {
    std::vector<Vec> pts;
    const long n0 = m.geom.shape[0];
    const long n1 = m.geom.dim == 2 ? m.geom.shape[1] : 1;
    for (long i = 0; i < n0; ++i) {
        long lo = -1, hi = -1;
        for (long j = 0; j < n1; ++j)
            if (m.on[static_cast<size_t>(i * n1 + j)]) {
                if (lo < 0) lo = j;
                hi = j;
            }
        if (lo < 0) continue;
        pts.push_back(m.geom.point({i, lo, 0}));
        if (hi != lo) pts.push_back(m.geom.point({i, hi, 0}));
    }
    return pts;
}

inline Polytope hull_of_mask(const Mask& m) {
    std::vector<Vec> pts = mask_hull_points(m);
    if (pts.empty()) return Polytope::empty_set(m.geom.dim);
    return Polytope::from_points(m.geom.dim, pts);
}

/* W1 of a 2D point set's hull with the degenerate conventions:
   full polygon -> perimeter/2, segment -> length, point/empty -> 0. */
inline Real quermass_w1_of_points(int dim, const std::vector<Vec>& pts) {
    if (pts.empty()) return 0.0;
    Polytope h = Polytope::from_points(dim, pts);
    if (h.full_dim()) return h.quermass_w1();
    const auto& v = h.vertices();
    if (dim == 2 && v.size() == 2) return norm(v[1] - v[0]);
    if (dim == 1 && !v.empty()) return h.full_dim() ? 2.0 : 0.0;
    return 0.0;
}

/* Theta-convolution body of K and L on a uniform x-grid over bbox(K)+bbox(L):
   keeps nodes where the section K cap (x - L) is nonempty with volume at
   least theta times the maximal section.  Exact polytope work per node. */
struct ThetaBody {
    Mask mask;
    Real maxSection = 0.0;
    Vec x0;            // lex-smallest maximizer node
    std::vector<Real> section; // per-node section volume, -1 when empty
};

inline ThetaBody theta_convolution_body(const Polytope& K, const Polytope& L, Real theta, long resolution) {
    if (K.dim() != L.dim()) throw std::invalid_argument("theta_convolution_body: dimension mismatch");
    if (K.dim() > 2) throw std::invalid_argument("theta_convolution_body: masks supported in dimension 1..2 only");
    if (resolution < 8) throw std::invalid_argument("theta_convolution_body: resolution must be >= 8");
    if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("theta_convolution_body: theta must lie in [0,1]");
    if (!K.full_dim() || !L.full_dim())
        throw std::invalid_argument("theta_convolution_body: operands must be full-dimensional");
    const int d = K.dim();
    Box bk = K.bbox(), bl = L.bbox();
    Vec lo = bk.lo + bl.lo, hi = bk.hi + bl.hi;
    std::array<Real, 3> sp{1, 1, 1};
    std::array<long, 3> sh{1, 1, 1};
    for (int i = 0; i < d; ++i) {
        sp[i] = (hi[i] - lo[i]) / static_cast<Real>(resolution);
        sh[i] = resolution + 1;
    }
    GridGeom geom(d, lo, sp, sh);
    Polytope Lr = L.reflected();
    std::vector<Real> section(static_cast<size_t>(geom.size()), -1.0);
    parallel_for(geom.size(), [&](long f) {
        Vec x = geom.point(f);
        Polytope S = intersect(K, Lr.translated(x));
        if (!S.is_empty()) section[static_cast<size_t>(f)] = S.volume();
    });
    Real maxV = 0.0;
    long x0f = 0;
    bool found = false;
    for (long f = 0; f < geom.size(); ++f) {
        Real v = section[static_cast<size_t>(f)];
        if (v >= 0.0 && (!found || v > maxV)) {
            maxV = v;
            x0f = f;
            found = true;
        }
    }
    ThetaBody out;
    out.mask = Mask(geom);
    out.maxSection = maxV;
    out.x0 = found ? geom.point(x0f) : geom.point(0L);
    Real thr = theta * maxV - 1e-9 * std::max(1.0, maxV);
    for (long f = 0; f < geom.size(); ++f) {
        Real v = section[static_cast<size_t>(f)];
        out.mask.on[static_cast<size_t>(f)] = (v >= 0.0 && v >= thr) ? 1 : 0;
    }
    out.section = std::move(section);
    return out;
}

/* Standard shapes used throughout the fixtures. */
inline Polytope make_simplex(int dim) {
    std::vector<Vec> pts{Vec(dim)};
    for (int i = 0; i < dim; ++i) {
        Vec e(dim);
        e[i] = 1.0;
        pts.push_back(e);
    }
    return Polytope::from_points(dim, pts);
}

inline Polytope make_box(const Vec& lo, const Vec& hi) {
    int d = lo.dim;
    std::vector<Vec> pts;
    for (int mask = 0; mask < (1 << d); ++mask) {
        Vec p(d);
        for (int i = 0; i < d; ++i) p[i] = (mask >> i & 1) ? hi[i] : lo[i];
        pts.push_back(p);
    }
    return Polytope::from_points(d, pts);
}

inline Polytope make_cross_polytope(int dim) {
    std::vector<Vec> pts;
    for (int i = 0; i < dim; ++i) {
        Vec e(dim);
        e[i] = 1.0;
        pts.push_back(e);
        pts.push_back(-e);
    }
    return Polytope::from_points(dim, pts);
}

} // namespace logconv
