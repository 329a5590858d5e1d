#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "logconv/grid_ops.hpp"
#include "logconv/model.hpp"
#include "logconv/oracle.hpp"
#include "logconv/polytope.hpp"
#include "logconv/rng.hpp"

using namespace logconv;

namespace {

GridFunction raster_interval(long n) {
    return rasterize(make_indicator(make_box(Vec(1, 0.0), Vec(1, 1.0))), n);
}

/* Gaussian samples on an explicit node lattice (integral points included by
   construction, unlike the midpoint raster). */
GridFunction lattice_gaussian(Real lo, Real h, long n) {
    GridGeom geom(1, Vec(1, lo), {h, 0, 0}, {n, 1, 1});
    std::vector<Real> lv(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
        Real x = lo + h * static_cast<Real>(i);
        lv[static_cast<size_t>(i)] = -0.5 * x * x;
    }
    return GridFunction(geom, std::move(lv));
}

/* The two-sided exponential pair: e^{-x} on [0,B] and e^{x} on [-B,0]. */
std::pair<GridFunction, GridFunction> exp_pair(Real B, Real h) {
    long n = std::lround(B / h) + 1;
    GridGeom gf(1, Vec(1, 0.0), {h, 0, 0}, {n, 1, 1});
    GridGeom gg(1, Vec(1, -B), {h, 0, 0}, {n, 1, 1});
    std::vector<Real> lf(static_cast<size_t>(n)), lg(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
        lf[static_cast<size_t>(i)] = -(h * static_cast<Real>(i));
        lg[static_cast<size_t>(i)] = -B + h * static_cast<Real>(i);
    }
    return {GridFunction(gf, std::move(lf)), GridFunction(gg, std::move(lg))};
}

Potential quadratic_potential(Real lo, Real hi, long count) {
    Real h = (hi - lo) / static_cast<Real>(count - 1);
    GridGeom geom(1, Vec(1, lo), {h, 0, 0}, {count, 1, 1});
    std::vector<Real> v(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i) {
        Real x = lo + h * static_cast<Real>(i);
        v[static_cast<size_t>(i)] = 0.5 * x * x;
    }
    return Potential(geom, std::move(v));
}

oracle::Potential1D to_oracle(const Potential& p) {
    return oracle::Potential1D{p.geom.origin[0], p.geom.spacing[0], p.v};
}

} // namespace

TEST_CASE("convolution of unit indicators is the tent") {
    const long N = 50;
    GridFunction f = raster_interval(N);
    GridFunction h = convolve(f, f);
    const Real hs = f.geom.spacing[0];
    REQUIRE(h.geom.shape[0] == 2 * N - 1);
    REQUIRE(h.geom.origin[0] == Catch::Approx(hs).margin(1e-15));
    // nodes sit where the tent is exactly representable: value 1 at x=1
    for (long k = 0; k < h.geom.shape[0]; ++k) {
        Real x = h.geom.point(k)[0];
        Real tent = 1.0 - std::abs(x - 1.0);
        REQUIRE(std::exp(h.logv[static_cast<size_t>(k)]) == Catch::Approx(tent).margin(1e-9));
    }
    REQUIRE(std::exp(h.log_at({N - 1, 0, 0})) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(h.integral() == Catch::Approx(f.integral() * f.integral()).epsilon(1e-9));
    REQUIRE(is_log_concave_midpoint(h));
}

TEST_CASE("convolution peak of the simplex against its reflection") {
    const long N = 64;
    GridFunction f = rasterize(make_indicator(make_simplex(2)), N);
    GridFunction g = reflect(f);
    GridFunction h = convolve(f, g);
    // max_x |T cap (x - (-T))| is |T| = 1/2, attained at x = 0
    REQUIRE(h.sup() == Catch::Approx(0.5).margin(2.0 / N));
    Vec peak = h.geom.point(h.argmax_flat());
    REQUIRE(std::abs(peak[0]) <= 2.0 * f.geom.spacing[0]);
    REQUIRE(std::abs(peak[1]) <= 2.0 * f.geom.spacing[1]);
    // Young bound and Fubini
    REQUIRE(h.sup() <= std::min(f.integral() * g.sup(), g.integral() * f.sup()) + 1e-9);
    REQUIRE(h.integral() == Catch::Approx(f.integral() * g.integral()).epsilon(1e-9));
}

TEST_CASE("asplund product of unit indicators covers the doubled interval") {
    const long N = 50;
    GridFunction f = raster_interval(N);
    GridFunction h = asplund(f, f);
    const Real hs = f.geom.spacing[0];
    REQUIRE(h.sup_log() == 0.0);
    REQUIRE(h.support().count() == 2 * N - 1);
    REQUIRE(h.integral() == Catch::Approx(2.0 - hs).margin(1e-12));
    REQUIRE(std::abs(h.integral() - 2.0) <= hs + 1e-12);
    // support hull stays inside [0,2] and reaches it within one cell
    Polytope hull = hull_of_mask(h.support());
    REQUIRE(hull.support(Vec(1, 1.0)) <= 2.0 + 1e-12);
    REQUIRE(hull.support(Vec(1, 1.0)) >= 2.0 - 1.5 * hs);
    REQUIRE(hull.support(Vec(1, -1.0)) <= 1e-12);
}

TEST_CASE("asplund sup norm and support mask are exact") {
    SeqRng rng(2026);
    auto random_fn = [&](int dim) {
        long n0 = 5 + static_cast<long>(rng.uniform(0, 10));
        long n1 = dim == 2 ? 4 + static_cast<long>(rng.uniform(0, 7)) : 1;
        GridGeom geom(dim, Vec(dim), {0.25, 0.25, 0}, {n0, n1, 1});
        std::vector<Real> lv(static_cast<size_t>(geom.size()), kNegInf);
        long on = 0;
        for (auto& v : lv)
            if (rng.uniform(0, 1) < 0.7) {
                v = rng.uniform(-3.0, 0.0);
                ++on;
            }
        if (on == 0) lv[0] = -1.0;
        return GridFunction(geom, std::move(lv));
    };
    for (int dim = 1; dim <= 2; ++dim)
        for (int rep = 0; rep < (dim == 1 ? 10 : 4); ++rep) {
            GridFunction f = random_fn(dim), g = random_fn(dim);
            GridFunction h = asplund(f, g);
            REQUIRE(h.sup_log() == f.sup_log() + g.sup_log());
            // expected support: exact index sums
            Mask expect(h.geom);
            Mask mf = f.support(), mg = g.support();
            const long f1 = dim == 2 ? f.geom.shape[1] : 1;
            const long g1 = dim == 2 ? g.geom.shape[1] : 1;
            const long h1 = dim == 2 ? h.geom.shape[1] : 1;
            for (long i0 = 0; i0 < f.geom.shape[0]; ++i0)
                for (long i1 = 0; i1 < f1; ++i1) {
                    if (!mf.on[static_cast<size_t>(i0 * f1 + i1)]) continue;
                    for (long j0 = 0; j0 < g.geom.shape[0]; ++j0)
                        for (long j1 = 0; j1 < g1; ++j1)
                            if (mg.on[static_cast<size_t>(j0 * g1 + j1)])
                                expect.on[static_cast<size_t>((i0 + j0) * h1 + (i1 + j1))] = 1;
                }
            REQUIRE(h.support().on == expect.on);
        }
}

TEST_CASE("grid operations reject mismatched lattices") {
    GridFunction a = raster_interval(10);
    GridFunction b = raster_interval(20);
    GridFunction c = rasterize(make_indicator(make_simplex(2)), 8);
    REQUIRE_THROWS_AS(convolve(a, b), std::invalid_argument);
    REQUIRE_THROWS_AS(asplund(a, b), std::invalid_argument);
    REQUIRE_THROWS_AS(convolve(a, c), std::invalid_argument);
    REQUIRE_THROWS_AS(oplus(a, c), std::invalid_argument);
}

TEST_CASE("point mass is the asplund identity") {
    GridFunction f = lattice_gaussian(-3.0, 0.25, 25);
    GridGeom unit(1, Vec(1, 0.5), {0.25, 0, 0}, {1, 1, 1});
    GridFunction delta(unit, {0.0});
    GridFunction h = asplund(f, delta);
    REQUIRE(h.geom.origin[0] == f.geom.origin[0] + 0.5);
    REQUIRE(h.logv == f.logv);
}

TEST_CASE("gaussian asplund square-root law") {
    const Real h = 0.025;
    GridFunction f = lattice_gaussian(-6.0, h, 481);
    GridFunction p = asplund(f, f);
    Real worst = 0.0;
    for (long k = 0; k < p.geom.shape[0]; ++k) {
        Real x = p.geom.point(k)[0];
        worst = std::max(worst, std::abs(p.logv[static_cast<size_t>(k)] - (-0.25 * x * x)));
    }
    REQUIRE(worst <= 0.25 * h * h + 1e-12);
    REQUIRE(p.integral() ==
            Catch::Approx(oracle::closed_form("gauss_asplund_integral_1d")).margin(1e-3));
    REQUIRE(is_log_concave_midpoint(p));
}

TEST_CASE("asplund argmax picks the analytic optimizer and breaks ties left") {
    // quadratic pair: optimizer z = x/2
    GridFunction f = lattice_gaussian(-6.0, 0.05, 241);
    Vec z = asplund_argmax(f, f, Vec(1, 2.0));
    REQUIRE(z[0] == Catch::Approx(1.0).margin(1e-12));

    // indicator tie: every feasible z attains the sup, the first index wins
    GridGeom gi(1, Vec(1, 0.0), {0.02, 0, 0}, {51, 1, 1});
    GridFunction ind(gi, std::vector<Real>(51, 0.0));
    REQUIRE(asplund_argmax(ind, ind, Vec(1, 0.5))[0] == Catch::Approx(0.0).margin(1e-15));

    // exponential pair: boundary optimizer at the apex
    auto [fe, ge] = exp_pair(5.0, 0.05);
    REQUIRE(asplund_argmax(fe, ge, Vec(1, -2.0))[0] == Catch::Approx(0.0).margin(1e-12));

    REQUIRE_THROWS_AS(asplund_argmax(ind, ind, Vec(1, 0.513)), std::invalid_argument);
    REQUIRE_THROWS_AS(asplund_argmax(ind, ind, Vec(1, 50.0)), std::invalid_argument);

    // on-lattice node outside the support sum
    std::vector<Real> sparse(11, kNegInf);
    sparse[0] = sparse[1] = 0.0;
    GridGeom gs(1, Vec(1, 0.0), {0.5, 0, 0}, {11, 1, 1});
    GridFunction fs(gs, sparse);
    REQUIRE_THROWS_AS(asplund_argmax(fs, fs, Vec(1, 8.0)), std::domain_error);
}

TEST_CASE("oplus halves the sum lattice exactly") {
    // the half lattice spans [-B/2, B/2], so B must absorb the e^{-B/2} tail
    auto [f, g] = exp_pair(12.0, 0.1);
    GridFunction h = asplund(f, g);
    GridFunction op = oplus(f, g);
    REQUIRE(op.geom.shape[0] == h.geom.shape[0]);
    REQUIRE(op.geom.origin[0] == 0.5 * h.geom.origin[0]);
    REQUIRE(op.geom.spacing[0] == 0.5 * h.geom.spacing[0]);
    for (size_t k = 0; k < op.logv.size(); ++k) REQUIRE(op.logv[k] == 0.5 * h.logv[k]);
    // closed form: f (+) g = e^{-|z|}
    for (long k = 0; k < op.geom.shape[0]; ++k) {
        Real zp = op.geom.point(k)[0];
        REQUIRE(op.logv[static_cast<size_t>(k)] == Catch::Approx(-std::abs(zp)).margin(1e-12));
    }
    REQUIRE(op.integral() ==
            Catch::Approx(oracle::closed_form("colesanti_exp_pair_lhs")).margin(0.02));

    // self-product dominates the function at shared nodes
    GridFunction sq = lattice_gaussian(-2.0, 0.25, 17);
    GridFunction ss = oplus(sq, sq);
    for (long i = 0; i < sq.geom.shape[0]; ++i)
        REQUIRE(ss.logv[static_cast<size_t>(2 * i)] >= sq.logv[static_cast<size_t>(i)]);
}

TEST_CASE("difference function of the unit indicator") {
    const long N = 64;
    GridFunction f = raster_interval(N);
    GridFunction d = diff_function(f);
    REQUIRE(d.integral() == Catch::Approx(1.0 - 1.0 / (2.0 * N)).margin(1e-12));
    REQUIRE(d.integral() <= 2.0 * f.integral());
    REQUIRE(d.geom.point(0)[0] >= -0.5);
    REQUIRE(d.geom.point(d.geom.shape[0] - 1)[0] <= 0.5);
    REQUIRE(d.sup_log() == 0.0);
}

TEST_CASE("legendre transform of the quadratic is self-conjugate") {
    Potential u = quadratic_potential(-4.0, 4.0, 129);
    const Real h = u.geom.spacing[0];
    LegendreResult r = legendre(u);
    REQUIRE_FALSE(r.fallback);
    for (long j = 0; j < r.star.geom.shape[0]; ++j) {
        Real s = r.star.geom.point(j)[0];
        REQUIRE(std::abs(r.star.v[static_cast<size_t>(j)] - 0.5 * s * s) <= 0.125 * h * h + 1e-12);
    }
}

TEST_CASE("legendre of the interval indicator is its support function") {
    GridGeom geom(1, Vec(1, -1.0), {0.05, 0, 0}, {61, 1, 1});
    std::vector<Real> v(61, kPosInf);
    for (long i = 20; i <= 40; ++i) v[static_cast<size_t>(i)] = 0.0; // zero on [0,1]
    Potential u(geom, v);
    GridGeom sgeom(1, Vec(1, -2.0), {0.05, 0, 0}, {81, 1, 1});
    LegendreResult r = legendre(u, sgeom);
    REQUIRE_FALSE(r.fallback);
    for (long j = 0; j < 81; ++j) {
        Real s = sgeom.point(j)[0];
        REQUIRE(r.star.v[static_cast<size_t>(j)] == Catch::Approx(std::max(0.0, s)).margin(1e-12));
    }
}

TEST_CASE("non-convex potentials fall back to the dense scan") {
    GridGeom geom(1, Vec(1, 0.0), {0.5, 0, 0}, {9, 1, 1});
    std::vector<Real> v(9, kPosInf);
    v[1] = 0.0;
    v[4] = -1.0;
    v[7] = 0.5; // scattered domain: not one contiguous run
    Potential u(geom, v);
    GridGeom sgeom(1, Vec(1, -3.0), {0.25, 0, 0}, {25, 1, 1});
    LegendreResult r = legendre(u, sgeom);
    REQUIRE(r.fallback);
    for (long j = 0; j < 25; ++j) {
        Real s = sgeom.point(j)[0], best = kNegInf;
        for (long i = 0; i < 9; ++i)
            if (v[static_cast<size_t>(i)] < kPosInf)
                best = std::max(best, s * geom.point(i)[0] - v[static_cast<size_t>(i)]);
        REQUIRE(r.star.v[static_cast<size_t>(j)] == Catch::Approx(best).margin(1e-12));
    }
}

TEST_CASE("double legendre transform recovers the convex envelope") {
    // W-shaped potential min((x+1)^2, (x-1)^2)/2 sampled on [-2,2] step 1/4:
    // the envelope keeps the outer parabola arcs and bridges [-1,1] at zero.
    // Every envelope slope is a multiple of 1/8, so an s-lattice of step 1/8
    // makes the double transform exact at the nodes.
    GridGeom xg(1, Vec(1, -2.0), {0.25, 0, 0}, {17, 1, 1});
    std::vector<Real> v(17);
    for (long i = 0; i < 17; ++i) {
        Real x = xg.point(i)[0];
        v[static_cast<size_t>(i)] = 0.5 * std::min((x + 1) * (x + 1), (x - 1) * (x - 1));
    }
    Potential u(xg, v);
    GridGeom sg(1, Vec(1, -0.875), {0.125, 0, 0}, {15, 1, 1});
    LegendreResult star = legendre(u, sg);
    REQUIRE(star.fallback); // W shape is not convex
    LegendreResult dbl = legendre(star.star, xg);
    REQUIRE_FALSE(dbl.fallback); // a conjugate is always convex
    for (long i = 0; i < 17; ++i) {
        Real x = xg.point(i)[0];
        Real env = std::abs(x) <= 1.0 ? 0.0 : 0.5 * (std::abs(x) - 1.0) * (std::abs(x) - 1.0);
        REQUIRE(dbl.star.v[static_cast<size_t>(i)] == Catch::Approx(env).margin(1e-12));
        REQUIRE(dbl.star.v[static_cast<size_t>(i)] <= v[static_cast<size_t>(i)] + 1e-12);
    }
}

TEST_CASE("two-dimensional legendre matches the dense scan") {
    GridGeom xg(2, Vec(2, -2.0, -2.0), {0.25, 0.25, 0}, {17, 17, 1});
    std::vector<Real> v(17 * 17);
    for (long i = 0; i < 17; ++i)
        for (long j = 0; j < 17; ++j) {
            Vec p = xg.point({i, j, 0});
            v[static_cast<size_t>(i * 17 + j)] =
                0.5 * (p[0] * p[0] + p[1] * p[1]) + 0.25 * p[0] * p[1];
        }
    Potential u(xg, v);
    GridGeom sg(2, Vec(2, -1.5, -1.5), {0.25, 0.25, 0}, {13, 13, 1});
    // the intermediate pass-2 lines of a cross-term quadratic need not be
    // discretely convex, so only the values are pinned, not the flag
    LegendreResult r = legendre(u, sg);
    for (long a = 0; a < 13; ++a)
        for (long b = 0; b < 13; ++b) {
            Vec s = sg.point({a, b, 0});
            Real best = kNegInf;
            for (long i = 0; i < 17; ++i)
                for (long j = 0; j < 17; ++j) {
                    Vec p = xg.point({i, j, 0});
                    best = std::max(best, s[0] * p[0] + s[1] * p[1] - v[static_cast<size_t>(i * 17 + j)]);
                }
            REQUIRE(r.star.v[static_cast<size_t>(a * 13 + b)] == Catch::Approx(best).margin(1e-12));
        }
}

TEST_CASE("conjugate-route infimal convolution matches the direct scan") {
    auto check_pair = [&](const Potential& u, const Potential& v, bool expectFast) {
        InfConv w = legendre_inf_conv(u, v);
        REQUIRE(w.viaConjugates == expectFast);
        oracle::Potential1D ref = oracle::brute_inf_conv(to_oracle(u), to_oracle(v));
        REQUIRE(w.w.v.size() == ref.v.size());
        for (size_t k = 0; k < ref.v.size(); ++k) {
            if (ref.v[k] == kPosInf)
                REQUIRE(w.w.v[k] == kPosInf);
            else
                REQUIRE(std::abs(w.w.v[k] - ref.v[k]) <= 1e-10);
        }
    };

    // quadratic pair: (x^2/2) box (x^2/2) = x^2/4
    Potential q = quadratic_potential(-4.0, 4.0, 257);
    check_pair(q, q, true);
    InfConv qq = legendre_inf_conv(q, q);
    const Real hq = q.geom.spacing[0];
    for (long k = 0; k < qq.w.geom.shape[0]; ++k) {
        Real x = qq.w.geom.point(k)[0];
        REQUIRE(std::abs(qq.w.v[static_cast<size_t>(k)] - 0.25 * x * x) <= hq * hq);
    }

    // indicator pair: interval sum
    GridGeom g1(1, Vec(1, 0.0), {0.1, 0, 0}, {11, 1, 1});
    GridGeom g2(1, Vec(1, -0.5), {0.1, 0, 0}, {11, 1, 1});
    Potential i1(g1, std::vector<Real>(11, 0.0));
    Potential i2(g2, std::vector<Real>(11, 0.0));
    check_pair(i1, i2, true);
    InfConv isum = legendre_inf_conv(i1, i2);
    for (size_t k = 0; k < isum.w.v.size(); ++k) REQUIRE(std::abs(isum.w.v[k]) <= 1e-12);

    // |x| against the quadratic, different windows
    GridGeom ga(1, Vec(1, -2.0), {0.03125, 0, 0}, {129, 1, 1});
    std::vector<Real> va(129);
    for (long i = 0; i < 129; ++i) va[static_cast<size_t>(i)] = std::abs(ga.point(i)[0]);
    Potential uabs(ga, va);
    Potential q2 = quadratic_potential(-4.0, 4.0, 257);
    check_pair(uabs, q2, true);

    // padded domains exercise the +inf window logic; dyadic nodes and slopes
    // keep the samples exactly convex in floating point, which the strict
    // fast-path check requires
    std::vector<Real> padded(41, kPosInf);
    GridGeom gp(1, Vec(1, -1.5), {0.0625, 0, 0}, {41, 1, 1});
    for (long i = 10; i <= 30; ++i) {
        Real x = gp.point(i)[0];
        padded[static_cast<size_t>(i)] = x * x;
    }
    GridGeom gq(1, Vec(1, 0.0), {0.0625, 0, 0}, {21, 1, 1});
    std::vector<Real> vq(21);
    for (long i = 0; i < 21; ++i) vq[static_cast<size_t>(i)] = 0.25 * gq.point(i)[0];
    check_pair(Potential(gp, padded), Potential(gq, vq), true);

    // single-node operand on the quadratic's lattice
    GridGeom gpt(1, Vec(1, 0.75), {q.geom.spacing[0], 0, 0}, {1, 1, 1});
    check_pair(Potential(gpt, {2.0}), q, true);

    // non-convex operand: direct scan, flag cleared
    std::vector<Real> wavy(33);
    for (long i = 0; i < 33; ++i) wavy[static_cast<size_t>(i)] = std::sin(0.7 * static_cast<Real>(i));
    GridGeom gw(1, Vec(1, -1.0), {0.0625, 0, 0}, {33, 1, 1});
    Potential q3 = quadratic_potential(-1.0, 1.0, 33);
    check_pair(Potential(gw, wavy), q3, false);

    REQUIRE_THROWS_AS(legendre_inf_conv(q, i1), std::invalid_argument); // spacing mismatch
}

TEST_CASE("random integer-convex potentials agree with the oracle") {
    SeqRng rng(99);
    auto random_convex = [&](long len) {
        // integer increments sorted ascending give an exactly convex sequence
        std::vector<Real> inc(static_cast<size_t>(len - 1));
        for (auto& d : inc) d = std::floor(rng.uniform(-5.0, 6.0));
        std::sort(inc.begin(), inc.end());
        std::vector<Real> v(static_cast<size_t>(len));
        v[0] = std::floor(rng.uniform(-4.0, 5.0));
        for (long i = 1; i < len; ++i) v[static_cast<size_t>(i)] = v[static_cast<size_t>(i - 1)] + inc[static_cast<size_t>(i - 1)];
        for (auto& x : v) x *= 0.5;
        Real origin = 0.25 * std::floor(rng.uniform(-8.0, 9.0));
        GridGeom geom(1, Vec(1, origin), {0.25, 0, 0}, {len, 1, 1});
        return Potential(geom, std::move(v));
    };
    for (int rep = 0; rep < 50; ++rep) {
        Potential u = random_convex(5 + static_cast<long>(rng.uniform(0, 36)));
        Potential v = random_convex(5 + static_cast<long>(rng.uniform(0, 36)));
        InfConv w = legendre_inf_conv(u, v);
        REQUIRE(w.viaConjugates);
        oracle::Potential1D ref = oracle::brute_inf_conv(to_oracle(u), to_oracle(v));
        for (size_t k = 0; k < ref.v.size(); ++k) {
            REQUIRE((ref.v[k] < kPosInf) == (w.w.v[k] < kPosInf));
            if (ref.v[k] < kPosInf) REQUIRE(std::abs(w.w.v[k] - ref.v[k]) <= 1e-10);
        }
    }
}

TEST_CASE("lattice products preserve log-concavity") {
    auto [fe, ge] = exp_pair(4.0, 0.125);
    REQUIRE(is_log_concave_midpoint(asplund(fe, ge)));
    REQUIRE(is_log_concave_midpoint(convolve(fe, ge)));

    GridFunction g1 = lattice_gaussian(-4.0, 0.125, 65);
    REQUIRE(is_log_concave_midpoint(asplund(g1, g1)));
    REQUIRE(is_log_concave_midpoint(convolve(g1, g1)));

    GridFunction ind = raster_interval(40);
    REQUIRE(is_log_concave_midpoint(asplund(ind, ind)));
    REQUIRE(is_log_concave_midpoint(convolve(ind, ind)));

    // separable 2D gaussian
    GridFunction g2 = rasterize(make_gaussian(Vec(2), SymMat::identity(2)), 32);
    REQUIRE(is_log_concave_midpoint(asplund(g2, g2), 1e-9));

    // simplex indicator against its reflection
    GridFunction ft = rasterize(make_indicator(make_simplex(2)), 32);
    GridFunction asp = asplund(ft, reflect(ft));
    REQUIRE(is_log_concave_midpoint(asp));
    REQUIRE(is_support_grid_convex(asp));
}

TEST_CASE("level sets and their hulls") {
    GridFunction g = rasterize(make_gaussian(Vec(1, 0.0), SymMat::identity(1)), 256);
    Mask m = level_set(g, std::exp(-0.5));
    Polytope hull = hull_of_mask(m);
    const Real h = g.geom.spacing[0];
    REQUIRE(hull.support(Vec(1, 1.0)) == Catch::Approx(1.0).margin(1.5 * h));
    REQUIRE(hull.support(Vec(1, -1.0)) == Catch::Approx(1.0).margin(1.5 * h));

    GridFunction ind = raster_interval(32);
    for (Real t : {0.25, 0.9, 1.0}) REQUIRE(level_set(ind, t).on == ind.support().on);
    REQUIRE(level_set(ind, 1.01).empty());

    GridFunction g2 = rasterize(make_gaussian(Vec(2), SymMat::identity(2)), 48);
    Mask prev = level_set(g2, 0.05);
    for (Real t : {0.2, 0.5, 0.8, 0.99}) {
        Mask cur = level_set(g2, t);
        for (size_t i = 0; i < cur.on.size(); ++i)
            if (cur.on[i]) REQUIRE(prev.on[i]); // nested downward
        prev = cur;
    }
}

TEST_CASE("indicator asplund hull tracks the minkowski sum") {
    Polytope T = make_simplex(2);
    Polytope L = make_box(Vec(2, -0.3, -0.2), Vec(2, 0.4, 0.3));
    const long N = 48;
    GridFunction f = rasterize(make_indicator(T), Box{Vec(2, 0.0, 0.0), Vec(2, 1.0, 1.0)}, N);
    GridFunction g = rasterize(make_indicator(L), Box{Vec(2, -0.3, -0.2), Vec(2, 0.7, 0.8)}, N);
    GridFunction h = asplund(f, g);
    Polytope hull = hull_of_mask(h.support());
    Polytope mk = minkowski_sum(T, L);
    const Real cell = 2.0 / N;
    for (int a = 0; a < 16; ++a) {
        Real ang = 2.0 * M_PI * a / 16.0;
        Vec u = Vec(2, std::cos(ang), std::sin(ang));
        REQUIRE(std::abs(hull.support(u) - mk.support(u)) <= cell);
    }
}
