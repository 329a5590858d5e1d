#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "logconv/grid.hpp"
#include "logconv/polytope.hpp"
#include "logconv/vec.hpp"

namespace logconv {

inline constexpr Real kDefaultEpsTail = 1e-6;

/* Symmetric positive-definite matrix for dimensions 1..3. */
struct SymMat {
    int dim = 0;
    std::array<std::array<Real, 3>, 3> a{{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};

    static SymMat identity(int d) {
        SymMat m;
        m.dim = d;
        for (int i = 0; i < d; ++i) m.a[i][i] = 1.0;
        return m;
    }
    Real det() const {
        if (dim == 1) return a[0][0];
        if (dim == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    }
    bool spd() const {
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j)
                if (std::abs(a[i][j] - a[j][i]) > 1e-12) return false;
        if (a[0][0] <= 0) return false;
        if (dim >= 2 && a[0][0] * a[1][1] - a[0][1] * a[1][0] <= 0) return false;
        if (dim == 3 && det() <= 0) return false;
        return true;
    }
    SymMat inverse() const {
        SymMat m;
        m.dim = dim;
        Real d = det();
        if (dim == 1) {
            m.a[0][0] = 1.0 / a[0][0];
        } else if (dim == 2) {
            m.a[0][0] = a[1][1] / d;
            m.a[1][1] = a[0][0] / d;
            m.a[0][1] = m.a[1][0] = -a[0][1] / d;
        } else {
            m.a[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / d;
            m.a[0][1] = m.a[1][0] = -(a[0][1] * a[2][2] - a[0][2] * a[2][1]) / d;
            m.a[0][2] = m.a[2][0] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / d;
            m.a[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / d;
            m.a[1][2] = m.a[2][1] = -(a[0][0] * a[1][2] - a[0][2] * a[1][0]) / d;
            m.a[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / d;
        }
        return m;
    }
    Real quad(const Vec& x) const { // x^T A x
        Real s = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) s += x[i] * a[i][j] * x[j];
        return s;
    }
};

/* f = scale * chi_body. */
struct IndicatorModel {
    Polytope body;
    Real scale = 1.0;
};

/* f(x) = scale * exp(-<slope, x-apex>) on apex + cone, cone = {<n_i,y> <= 0}.
   Integrable iff <slope, d> > 0 for every generating ray d of the cone. */
struct ExpConeModel {
    Real scale = 1.0;
    Vec slope;
    Vec apex;
    std::vector<Vec> coneNormals;
};

/* f(x) = scale * exp(-(x-mean)^T cov^{-1} (x-mean) / 2). */
struct GaussianModel {
    Vec mean;
    SymMat cov;
    Real scale = 1.0;
};

struct GridModel {
    GridFunction grid;
};

struct LogConcaveModel {
    std::variant<IndicatorModel, ExpConeModel, GaussianModel, GridModel> value;
};

namespace modeldetail {

/* Generating rays of a pointed polyhedral cone {y : <n_i,y> <= 0}. */
inline std::vector<Vec> cone_rays(int dim, const std::vector<Vec>& normals) {
    Real tol = 1e-9;
    std::vector<Vec> rays;
    auto inside = [&](const Vec& d) {
        for (const Vec& n : normals)
            if (dot(n, d) > tol) return false;
        return true;
    };
    if (dim == 1) {
        if (normals.size() != 1) throw std::invalid_argument("ExpConeModel: 1D cone needs exactly one normal");
        Vec d = normals[0] * (-1.0 / norm(normals[0]));
        rays.push_back(d);
    } else if (dim == 2) {
        for (const Vec& n : normals) {
            Vec d(2, n[1], -n[0]);
            d = d * (1.0 / norm(d));
            if (inside(d)) rays.push_back(d);
            if (inside(-d)) rays.push_back(-d);
        }
    } else {
        for (size_t i = 0; i < normals.size(); ++i)
            for (size_t j = i + 1; j < normals.size(); ++j) {
                Vec d = cross(normals[i], normals[j]);
                Real ln = norm(d);
                if (ln < 1e-12) continue;
                d = d * (1.0 / ln);
                if (inside(d)) rays.push_back(d);
                if (inside(-d)) rays.push_back(-d);
            }
    }
    // dedupe directions
    std::vector<Vec> uniq;
    for (const Vec& d : rays) {
        bool dup = false;
        for (const Vec& e : uniq) dup = dup || dist_inf(d, e) <= 1e-9;
        if (!dup) uniq.push_back(d);
    }
    if (uniq.empty()) throw std::invalid_argument("ExpConeModel: cone has no rays (empty or not pointed)");
    return uniq;
}

/* Regularized upper incomplete gamma Q(n, x) for n = 1..3. */
inline Real gamma_q_int(int n, Real x) {
    Real s = 1.0, term = 1.0;
    for (int k = 1; k < n; ++k) {
        term *= x / static_cast<Real>(k);
        s += term;
    }
    return std::exp(-x) * s;
}

/* Chi-square upper tail P(q > r^2) in dimension n = 1..3. */
inline Real chi2_tail(int n, Real r) {
    if (n == 1) return std::erfc(r / std::sqrt(2.0));
    if (n == 2) return std::exp(-r * r / 2.0);
    return std::erfc(r / std::sqrt(2.0)) + std::sqrt(2.0 / M_PI) * r * std::exp(-r * r / 2.0);
}

inline Real solve_increasing(const std::function<Real(Real)>& tail, Real eps) {
    Real hi = 1.0;
    while (tail(hi) > eps && hi < 1e6) hi *= 2.0;
    Real lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        Real mid = 0.5 * (lo + hi);
        if (tail(mid) > eps) lo = mid;
        else hi = mid;
    }
    return hi;
}

} // namespace modeldetail

inline int model_dim(const LogConcaveModel& m) {
    return std::visit(
        [](const auto& v) -> int {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IndicatorModel>) return v.body.dim();
            else if constexpr (std::is_same_v<T, ExpConeModel>) return v.apex.dim;
            else if constexpr (std::is_same_v<T, GaussianModel>) return v.mean.dim;
            else return v.grid.geom.dim;
        },
        m.value);
}

/* Construction-time validation; degenerate supports are rejected here. */
inline void validate_model(const LogConcaveModel& m) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IndicatorModel>) {
                if (!(v.scale > 0.0)) throw std::invalid_argument("IndicatorModel: scale must be positive");
                if (!v.body.full_dim()) throw std::invalid_argument("IndicatorModel: support must be full-dimensional");
            } else if constexpr (std::is_same_v<T, ExpConeModel>) {
                if (!(v.scale > 0.0)) throw std::invalid_argument("ExpConeModel: scale must be positive");
                if (v.slope.dim != v.apex.dim) throw std::invalid_argument("ExpConeModel: slope/apex dimension mismatch");
                auto rays = modeldetail::cone_rays(v.apex.dim, v.coneNormals);
                if (static_cast<int>(rays.size()) < v.apex.dim)
                    throw std::invalid_argument("ExpConeModel: cone is not full-dimensional");
                for (const Vec& d : rays)
                    if (dot(v.slope, d) <= 1e-9)
                        throw std::invalid_argument("ExpConeModel: not integrable along a cone ray");
            } else if constexpr (std::is_same_v<T, GaussianModel>) {
                if (!(v.scale > 0.0)) throw std::invalid_argument("GaussianModel: scale must be positive");
                if (v.cov.dim != v.mean.dim) throw std::invalid_argument("GaussianModel: cov/mean dimension mismatch");
                if (!v.cov.spd()) throw std::invalid_argument("GaussianModel: covariance must be symmetric positive definite");
            } else {
                (void)v; // GridFunction validated on construction
            }
        },
        m.value);
}

inline LogConcaveModel make_indicator(Polytope body, Real scale = 1.0) {
    LogConcaveModel m{IndicatorModel{std::move(body), scale}};
    validate_model(m);
    return m;
}
inline LogConcaveModel make_exp_cone(Real scale, Vec slope, Vec apex, std::vector<Vec> coneNormals) {
    LogConcaveModel m{ExpConeModel{scale, slope, apex, std::move(coneNormals)}};
    validate_model(m);
    return m;
}
inline LogConcaveModel make_gaussian(Vec mean, SymMat cov, Real scale = 1.0) {
    LogConcaveModel m{GaussianModel{mean, cov, scale}};
    validate_model(m);
    return m;
}
inline LogConcaveModel make_grid_model(GridFunction g) { return LogConcaveModel{GridModel{std::move(g)}}; }

inline Real log_evaluate(const LogConcaveModel& m, const Vec& x) {
    if (x.dim != model_dim(m)) throw std::invalid_argument("evaluate: dimension mismatch");
    return std::visit(
        [&](const auto& v) -> Real {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IndicatorModel>) {
                return v.body.contains(x) ? std::log(v.scale) : kNegInf;
            } else if constexpr (std::is_same_v<T, ExpConeModel>) {
                Vec y = x - v.apex;
                for (const Vec& n : v.coneNormals)
                    if (dot(n, y) > kGeomTol * std::max(1.0, norm(y))) return kNegInf;
                return std::log(v.scale) - dot(v.slope, y);
            } else if constexpr (std::is_same_v<T, GaussianModel>) {
                Vec y = x - v.mean;
                return std::log(v.scale) - 0.5 * v.cov.inverse().quad(y);
            } else {
                auto idx = v.grid.geom.nearest(x);
                return v.grid.log_at(idx);
            }
        },
        m.value);
}

inline Real evaluate(const LogConcaveModel& m, const Vec& x) { return std::exp(log_evaluate(m, x)); }

/* (reflect m)(x) = m(-x), exact in the parameters. */
inline LogConcaveModel reflect(const LogConcaveModel& m) {
    return std::visit(
        [](const auto& v) -> LogConcaveModel {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IndicatorModel>) {
                return LogConcaveModel{IndicatorModel{v.body.reflected(), v.scale}};
            } else if constexpr (std::is_same_v<T, ExpConeModel>) {
                ExpConeModel r = v;
                r.apex = -v.apex;
                r.slope = -v.slope;
                for (Vec& n : r.coneNormals) n = -n;
                return LogConcaveModel{r};
            } else if constexpr (std::is_same_v<T, GaussianModel>) {
                GaussianModel r = v;
                r.mean = -v.mean;
                return LogConcaveModel{r};
            } else {
                return LogConcaveModel{GridModel{reflect(v.grid)}};
            }
        },
        m.value);
}

inline Real sup_norm(const LogConcaveModel& m) {
    return std::visit(
        [](const auto& v) -> Real {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IndicatorModel>) return v.scale;
            else if constexpr (std::is_same_v<T, ExpConeModel>) return v.scale; // attained at the apex
            else if constexpr (std::is_same_v<T, GaussianModel>) return v.scale;
            else return v.grid.sup();
        },
        m.value);
}

/* Closed-form total mass; grid models integrate their samples. */
inline Real integral_exact(const LogConcaveModel& m) {
    return std::visit(
        [](const auto& v) -> Real {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IndicatorModel>) {
                return v.scale * v.body.volume();
            } else if constexpr (std::is_same_v<T, ExpConeModel>) {
                int d = v.apex.dim;
                std::vector<Halfspace> hs;
                for (const Vec& n : v.coneNormals) hs.push_back({n, 0.0});
                hs.push_back({v.slope, 1.0});
                Polytope sec = Polytope::from_halfspaces(d, hs);
                Real fact = 1.0;
                for (int k = 2; k <= d; ++k) fact *= k;
                return v.scale * fact * sec.volume();
            } else if constexpr (std::is_same_v<T, GaussianModel>) {
                int d = v.mean.dim;
                return v.scale * std::pow(2.0 * M_PI, 0.5 * d) * std::sqrt(v.cov.det());
            } else {
                return v.grid.integral();
            }
        },
        m.value);
}

/* Smallest analytic box whose complement holds at most epsTail of the mass.
   Indicators and grids are captured exactly. */
inline Box default_box(const LogConcaveModel& m, Real epsTail = kDefaultEpsTail) {
    if (!(epsTail > 0.0 && epsTail < 1.0)) throw std::invalid_argument("default_box: epsTail must lie in (0,1)");
    return std::visit(
        [&](const auto& v) -> Box {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IndicatorModel>) {
                return v.body.bbox();
            } else if constexpr (std::is_same_v<T, ExpConeModel>) {
                int d = v.apex.dim;
                Real R = modeldetail::solve_increasing(
                    [&](Real r) { return modeldetail::gamma_q_int(d, r); }, epsTail);
                std::vector<Halfspace> hs;
                for (const Vec& n : v.coneNormals) hs.push_back({n, 0.0});
                hs.push_back({v.slope, R});
                Polytope sec = Polytope::from_halfspaces(d, hs);
                Box b = sec.bbox();
                return Box{b.lo + v.apex, b.hi + v.apex};
            } else if constexpr (std::is_same_v<T, GaussianModel>) {
                int d = v.mean.dim;
                Real R = modeldetail::solve_increasing(
                    [&](Real r) { return modeldetail::chi2_tail(d, r); }, epsTail);
                Box b{v.mean, v.mean};
                for (int i = 0; i < d; ++i) {
                    Real w = R * std::sqrt(v.cov.a[i][i]);
                    b.lo[i] -= w;
                    b.hi[i] += w;
                }
                return b;
            } else {
                const GridGeom& g = v.grid.geom;
                Box b{g.origin, g.origin};
                for (int i = 0; i < g.dim; ++i) {
                    b.lo[i] -= 0.5 * g.spacing[i];
                    b.hi[i] += g.spacing[i] * (static_cast<Real>(g.shape[i] - 1) + 0.5);
                }
                return b;
            }
        },
        m.value);
}

/* Midpoint sampling of the model on `resolution` cells per axis of `box`.
   The box must cover the analytic truncation box for epsTail. */
inline GridFunction rasterize(const LogConcaveModel& m, const Box& box, long resolution,
                              Real epsTail = kDefaultEpsTail) {
    int d = model_dim(m);
    if (d > 2) throw std::invalid_argument("rasterize: grids support dimension 1..2");
    if (box.dim() != d) throw std::invalid_argument("rasterize: box dimension mismatch");
    if (resolution < 2) throw std::invalid_argument("rasterize: resolution must be >= 2");
    Box need = default_box(m, epsTail);
    Real slack = 1e-9 * std::max(1.0, dist_inf(box.hi, box.lo));
    if (!box.contains(need, slack))
        throw std::invalid_argument("rasterize: box misses more than epsTail of the mass");
    std::array<Real, 3> sp{1, 1, 1};
    std::array<long, 3> sh{1, 1, 1};
    Vec org(d);
    for (int i = 0; i < d; ++i) {
        sp[i] = box.extent(i) / static_cast<Real>(resolution);
        sh[i] = resolution;
        org[i] = box.lo[i] + 0.5 * sp[i];
    }
    GridGeom geom(d, org, sp, sh);
    std::vector<Real> lv(static_cast<size_t>(geom.size()), kNegInf);
    for (long f = 0; f < geom.size(); ++f) lv[static_cast<size_t>(f)] = log_evaluate(m, geom.point(f));
    return GridFunction(geom, std::move(lv));
}

inline GridFunction rasterize(const LogConcaveModel& m, long resolution, Real epsTail = kDefaultEpsTail) {
    return rasterize(m, default_box(m, epsTail), resolution, epsTail);
}

/* Superlevel set {f >= tau * sup f} as an exact polytope; Gaussians have
   ellipsoidal level sets and only expose the volume below. */
inline Polytope exact_superlevel(const LogConcaveModel& m, Real tau) {
    if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("exact_superlevel: tau must lie in (0,1]");
    return std::visit(
        [&](const auto& v) -> Polytope {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IndicatorModel>) {
                return v.body;
            } else if constexpr (std::is_same_v<T, ExpConeModel>) {
                int d = v.apex.dim;
                std::vector<Halfspace> hs;
                for (const Vec& n : v.coneNormals) hs.push_back({n, 0.0});
                hs.push_back({v.slope, -std::log(tau)});
                return Polytope::from_halfspaces(d, hs).translated(v.apex);
            } else {
                throw std::invalid_argument("exact_superlevel: no polytope level sets for this variant");
            }
        },
        m.value);
}

inline Real exact_superlevel_volume(const LogConcaveModel& m, Real tau) {
    if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("exact_superlevel_volume: tau must lie in (0,1]");
    if (std::holds_alternative<GaussianModel>(m.value)) {
        const auto& v = std::get<GaussianModel>(m.value);
        int d = v.mean.dim;
        Real r2 = -2.0 * std::log(tau);
        const Real unitBall[4] = {0.0, 2.0, M_PI, 4.0 * M_PI / 3.0};
        return unitBall[d] * std::pow(r2, 0.5 * d) * std::sqrt(v.cov.det());
    }
    return exact_superlevel(m, tau).volume();
}

} // namespace logconv
