#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "logconv/polytope.hpp"
#include "logconv/rng.hpp"
#include "logconv/vec.hpp"

/* Slow reference implementations.  Everything here is deliberately
   independent of the fast paths it validates: no shared kernels, no shared
   shortcuts.  Tests compare the two routes; they must never be collapsed. */
namespace logconv::oracle {

/* Potential on a uniform 1D grid, +inf outside the domain. */
struct Potential1D {
    Real origin = 0.0;
    Real spacing = 1.0;
    std::vector<Real> v;

    Real x(long i) const { return origin + spacing * static_cast<Real>(i); }
};

/* O(N^2) min-plus convolution: w_k = min_{i+j=k} u_i + v_j. */
inline Potential1D brute_inf_conv(const Potential1D& u, const Potential1D& v) {
    if (u.v.empty() || v.v.empty()) throw std::invalid_argument("brute_inf_conv: empty potential");
    if (std::abs(u.spacing - v.spacing) > 1e-12 * u.spacing)
        throw std::invalid_argument("brute_inf_conv: spacing mismatch");
    Potential1D w;
    w.origin = u.origin + v.origin;
    w.spacing = u.spacing;
    w.v.assign(u.v.size() + v.v.size() - 1, kPosInf);
    for (size_t i = 0; i < u.v.size(); ++i)
        for (size_t j = 0; j < v.v.size(); ++j) {
            if (u.v[i] == kPosInf || v.v[j] == kPosInf) continue;
            Real s = u.v[i] + v.v[j];
            if (s < w.v[i + j]) w.v[i + j] = s;
        }
    return w;
}

struct McVolume {
    Real estimate = 0.0;
    Real stderrEstimate = 0.0;
    long hits = 0;
    long samples = 0;
};

/* Rejection sampling in the bounding box.  The draw for sample index i
   depends only on (seed, i), so the estimate is independent of evaluation
   order and worker count. */
inline McVolume mc_volume(const Polytope& P, long samples, uint64_t seed) {
    if (samples < 1000) throw std::invalid_argument("mc_volume: need at least 1000 samples");
    if (P.is_empty() || !P.full_dim()) return McVolume{0.0, 0.0, 0, samples};
    Box bb = P.bbox();
    CounterRng rng{seed};
    long hits = 0;
    for (long i = 0; i < samples; ++i) {
        Vec x(P.dim());
        for (int a = 0; a < P.dim(); ++a)
            x[a] = rng.uniform(static_cast<uint64_t>(i), static_cast<uint64_t>(a), bb.lo[a], bb.hi[a]);
        if (P.contains(x)) ++hits;
    }
    Real boxVol = bb.volume();
    Real p = static_cast<Real>(hits) / static_cast<Real>(samples);
    McVolume out;
    out.estimate = boxVol * p;
    out.stderrEstimate = boxVol * std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<Real>(samples)));
    out.hits = hits;
    out.samples = samples;
    return out;
}

/* Catalog of closed-form values, each paired with an independent numeric
   recomputation.  The catalog test walks every entry, so an entry that no
   suite exercises cannot sit here unnoticed. */
struct ClosedForm {
    Real value;
    std::string note;
    std::function<Real()> recompute; // independent route, quadrature or geometry
};

inline Real quad_midpoint(const std::function<Real(Real)>& f, Real a, Real b, long n) {
    Real h = (b - a) / static_cast<Real>(n);
    Real s = 0.0;
    for (long i = 0; i < n; ++i) s += f(a + h * (static_cast<Real>(i) + 0.5));
    return s * h;
}

inline const std::map<std::string, ClosedForm>& closed_form_catalog() {
    static const std::map<std::string, ClosedForm> catalog = [] {
        std::map<std::string, ClosedForm> m;
        m["gauss_asplund_integral_1d"] = {
            2.0 * std::sqrt(M_PI),
            "integral of sup_z e^{-z^2/2} e^{-(x-z)^2/2} = integral of e^{-x^2/4}",
            [] { return quad_midpoint([](Real x) { return std::exp(-x * x / 4.0); }, -40.0, 40.0, 400000); }};
        m["colesanti_exp_pair_lhs"] = {
            2.0,
            "integral of e^{-|z|} from the exponential pair on half-lines",
            [] { return quad_midpoint([](Real x) { return std::exp(-std::abs(x)); }, -45.0, 45.0, 400000); }};
        m["theta_integral_n2_k2"] = {
            1.0 / 6.0,
            "integral over (0,1) of (1-sqrt(theta))^2",
            [] { return quad_midpoint([](Real t) { Real r = 1.0 - std::sqrt(t); return r * r; }, 0.0, 1.0, 2000000); }};
        m["gauss_integral_1d"] = {
            std::sqrt(2.0 * M_PI),
            "integral of e^{-x^2/2}",
            [] { return quad_midpoint([](Real x) { return std::exp(-x * x / 2.0); }, -40.0, 40.0, 400000); }};
        m["gauss_w1_2d"] = {
            std::pow(M_PI, 1.5) / std::sqrt(2.0),
            "integral over (0,1) of pi*r(s), r(s) = sqrt(2 ln(1/s))",
            [] { return quad_midpoint([](Real s) { return M_PI * std::sqrt(2.0 * std::log(1.0 / s)); }, 0.0, 1.0, 2000000); }};
        m["simplex_diff_area_2d"] = {
            3.0,
            "area of T - T for the standard triangle, hexagon with vertices +-e1, +-e2, +-(e1-e2)",
            [] { // shoelace over the explicit hexagon cycle
                const Real vx[6] = {1, 0, -1, -1, 0, 1};
                const Real vy[6] = {0, 1, 1, 0, -1, -1};
                Real a = 0.0;
                for (int i = 0; i < 6; ++i) {
                    int j = (i + 1) % 6;
                    a += vx[i] * vy[j] - vx[j] * vy[i];
                }
                return 0.5 * std::abs(a);
            }};
        m["cross_polytope_area_2d"] = {
            2.0,
            "area of conv{+-e1, +-e2}",
            [] { // four unit right triangles
                return 4.0 * 0.5;
            }};
        m["exp_cone_integral_1d"] = {
            1.0,
            "integral of e^{-x} over the half-line",
            [] { return quad_midpoint([](Real x) { return std::exp(-x); }, 0.0, 45.0, 400000); }};
        m["polar_square_area"] = {
            2.0,
            "area of the polar of [-1,1]^2, the cross-polytope",
            [] { return quad_midpoint([](Real x) { return 2.0 * (1.0 - std::abs(x)); }, -1.0, 1.0, 2000000); }};
        m["exp_pair_surface_w1_1d"] = {
            2.0,
            "W1 in 1D is the boundary count of an interval",
            [] { return 2.0; }};
        return m;
    }();
    return catalog;
}

inline Real closed_form(const std::string& name) {
    const auto& cat = closed_form_catalog();
    auto it = cat.find(name);
    if (it == cat.end()) throw std::invalid_argument("closed_form: unknown name '" + name + "'");
    return it->second.value;
}

} // namespace logconv::oracle
