#include <catch2/catch_amalgamated.hpp>

#include "logconv/oracle.hpp"
#include "logconv/polytope.hpp"
#include "logconv/rng.hpp"

using namespace logconv;

namespace {

Polytope random_polygon(SeqRng& rng, int npts) {
    for (;;) {
        std::vector<Vec> pts;
        for (int i = 0; i < npts; ++i) pts.push_back(Vec(2, rng.uniform(-1, 1), rng.uniform(-1, 1)));
        Polytope p = Polytope::from_points(2, pts);
        if (p.full_dim() && p.volume() > 1e-3) return p;
    }
}

Polytope random_polytope3(SeqRng& rng, int npts) {
    for (;;) {
        std::vector<Vec> pts;
        for (int i = 0; i < npts; ++i)
            pts.push_back(Vec(3, rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)));
        Polytope p = Polytope::from_points(3, pts);
        if (p.full_dim() && p.volume() > 1e-3) return p;
    }
}

} // namespace

TEST_CASE("standard simplex in the plane") {
    Polytope T = make_simplex(2);
    REQUIRE(T.vertices().size() == 3);
    REQUIRE(T.full_dim());
    REQUIRE(T.volume() == Catch::Approx(0.5).margin(1e-15));
    REQUIRE(T.surface_area() == Catch::Approx(2.0 + std::sqrt(2.0)).margin(1e-12));
    REQUIRE(T.quermass_w1() == Catch::Approx((2.0 + std::sqrt(2.0)) / 2.0).margin(1e-12));
    REQUIRE(T.representations_consistent());
    REQUIRE_FALSE(T.is_centrally_symmetric());
}

TEST_CASE("difference body of the simplex is the hexagon of area 3") {
    Polytope T = make_simplex(2);
    Polytope D = minkowski_sum(T, T.reflected());
    REQUIRE(D.vertices().size() == 6);
    REQUIRE(D.volume() == oracle::closed_form("simplex_diff_area_2d")); // exactly 3
    REQUIRE(D.is_centrally_symmetric());
    REQUIRE(D.representations_consistent());
    // vertices are +-e1, +-e2, +-(e1-e2)
    for (Vec v : {Vec(2, 1, 0), Vec(2, 0, 1), Vec(2, 1, -1)}) {
        REQUIRE(D.contains(v, 1e-12));
        REQUIRE(D.contains(-v, 1e-12));
        REQUIRE_FALSE(D.contains(v * 1.01, 1e-12));
    }
}

TEST_CASE("difference body of a symmetric body doubles it") {
    Polytope K = make_box(Vec(2, -1, -0.5), Vec(2, 1, 0.5));
    Polytope D = minkowski_sum(K, K.reflected());
    REQUIRE(D.volume() == Catch::Approx(4.0 * K.volume()).margin(1e-12));
}

TEST_CASE("hull of simplex and its reflection is the cross-polytope") {
    Polytope T = make_simplex(2);
    Polytope U = convex_hull_union(T, T.reflected());
    REQUIRE(U.vertices().size() == 4);
    REQUIRE(U.volume() == Catch::Approx(oracle::closed_form("cross_polytope_area_2d")).margin(1e-12));
}

TEST_CASE("polar of the square is the cross-polytope and polarity is an involution") {
    Polytope K = make_box(Vec(2, -1, -1), Vec(2, 1, 1));
    Polytope Kp = polar(K);
    REQUIRE(Kp.volume() == Catch::Approx(oracle::closed_form("polar_square_area")).margin(1e-9));
    Polytope Kpp = polar(Kp);
    REQUIRE(Kpp.vertices().size() == K.vertices().size());
    for (const Vec& v : K.vertices()) {
        bool found = false;
        for (const Vec& w : Kpp.vertices()) found = found || dist_inf(v, w) <= 1e-9;
        REQUIRE(found);
    }

    SeqRng rng(17);
    for (int it = 0; it < 25; ++it) {
        Polytope P = random_polygon(rng, 6);
        Vec c = P.vertex_mean();
        P = P.translated(-c); // origin interior
        if (!P.contains(Vec(2), 1e-6)) continue;
        bool interior = true;
        for (const auto& h : P.halfspaces()) interior = interior && h.offset > 1e-6;
        if (!interior) continue;
        Polytope Q = polar(polar(P));
        REQUIRE(Q.vertices().size() == P.vertices().size());
        for (size_t i = 0; i < P.vertices().size(); ++i)
            REQUIRE(dist_inf(Q.vertices()[i], P.vertices()[i]) <= 1e-9);
    }
}

TEST_CASE("polar requires an interior origin") {
    Polytope T = make_simplex(2); // origin is a vertex
    REQUIRE_THROWS_AS(polar(T), std::invalid_argument);
}

TEST_CASE("support function is additive under Minkowski sum") {
    SeqRng rng(5);
    for (int it = 0; it < 20; ++it) {
        Polytope P = random_polygon(rng, 5);
        Polytope Q = random_polygon(rng, 7);
        Polytope S = minkowski_sum(P, Q);
        for (int k = 0; k < 12; ++k) {
            Real a = rng.uniform(0, 2 * M_PI);
            Vec u(2, std::cos(a), std::sin(a));
            REQUIRE(S.support(u) == Catch::Approx(P.support(u) + Q.support(u)).margin(1e-9));
        }
    }
}

TEST_CASE("intersections: proper, empty, and degenerate") {
    Polytope A = make_box(Vec(2, 0, 0), Vec(2, 1, 1));
    Polytope B = make_box(Vec(2, 0.5, 0.25), Vec(2, 2, 2));
    Polytope I = intersect(A, B);
    REQUIRE(I.volume() == Catch::Approx(0.5 * 0.75).margin(1e-12));

    Polytope C = make_box(Vec(2, 3, 3), Vec(2, 4, 4));
    Polytope E = intersect(A, C);
    REQUIRE(E.is_empty());
    REQUIRE(E.volume() == 0.0);

    Polytope D = make_box(Vec(2, 1, 0), Vec(2, 2, 1)); // shares an edge with A
    Polytope G = intersect(A, D);
    REQUIRE_FALSE(G.is_empty());
    REQUIRE_FALSE(G.full_dim());
    REQUIRE(G.volume() == 0.0);
}

TEST_CASE("dimension mismatch is rejected") {
    REQUIRE_THROWS_AS(minkowski_sum(make_simplex(2), make_simplex(3)), std::invalid_argument);
    REQUIRE_THROWS_AS(intersect(make_simplex(2), make_simplex(3)), std::invalid_argument);
}

TEST_CASE("surface area requires full dimension") {
    Polytope seg = Polytope::from_points(2, {Vec(2, 0, 0), Vec(2, 1, 1)});
    REQUIRE_FALSE(seg.full_dim());
    REQUIRE_THROWS_AS(seg.surface_area(), std::invalid_argument);
}

TEST_CASE("three-dimensional bodies") {
    Polytope cube = make_box(Vec(3, 0, 0, 0), Vec(3, 1, 1, 1));
    REQUIRE(cube.volume() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(cube.surface_area() == Catch::Approx(6.0).margin(1e-9));
    REQUIRE(cube.quermass_w1() == Catch::Approx(2.0).margin(1e-9));
    REQUIRE(cube.vertices().size() == 8);
    REQUIRE(cube.representations_consistent());

    Polytope T3 = make_simplex(3);
    REQUIRE(T3.volume() == Catch::Approx(1.0 / 6.0).margin(1e-12));
    Polytope D3 = minkowski_sum(T3, T3.reflected());
    // difference body of an n-simplex has volume binom(2n, n) * |T|
    REQUIRE(D3.volume() == Catch::Approx(20.0 / 6.0).margin(1e-10));
    REQUIRE(D3.is_centrally_symmetric(1e-9));

    Polytope S3 = minkowski_sum(cube, cube);
    REQUIRE(S3.volume() == Catch::Approx(8.0).margin(1e-10));

    Polytope oct = make_cross_polytope(3);
    REQUIRE(oct.volume() == Catch::Approx(4.0 / 3.0).margin(1e-10));
    Polytope octPolar = polar(oct);
    REQUIRE(octPolar.volume() == Catch::Approx(8.0).margin(1e-9)); // the cube [-1,1]^3
}

TEST_CASE("one-dimensional bodies") {
    Polytope I = make_box(Vec(1, 0), Vec(1, 1));
    REQUIRE(I.volume() == 1.0);
    REQUIRE(I.surface_area() == 2.0);
    REQUIRE(I.quermass_w1() == 2.0);
    Polytope S = minkowski_sum(I, I.reflected());
    REQUIRE(S.volume() == Catch::Approx(2.0).margin(1e-15));
    Polytope J = make_box(Vec(1, -1), Vec(1, 1));
    Polytope Jp = polar(J); // [-1,1] is self-polar
    REQUIRE(Jp.volume() == Catch::Approx(2.0).margin(1e-12));
    REQUIRE(polar(make_box(Vec(1, -0.5), Vec(1, 0.5))).volume() == Catch::Approx(4.0).margin(1e-12));
}

TEST_CASE("dual representations agree after a round trip") {
    SeqRng rng(29);
    for (int it = 0; it < 30; ++it) {
        Polytope P = it % 3 == 2 ? random_polytope3(rng, 8) : random_polygon(rng, 4 + it % 5);
        Polytope Q = Polytope::from_halfspaces(P.dim(), P.halfspaces());
        REQUIRE(Q.vertices().size() == P.vertices().size());
        for (const Vec& v : P.vertices()) {
            bool found = false;
            for (const Vec& w : Q.vertices()) found = found || dist_inf(v, w) <= 1e-9;
            REQUIRE(found);
        }
        REQUIRE(Q.volume() == Catch::Approx(P.volume()).margin(1e-9));
    }
}

TEST_CASE("Minkowski sum volume agrees with Monte Carlo") {
    SeqRng rng(101);
    for (int it = 0; it < 6; ++it) {
        Polytope P = it < 4 ? random_polygon(rng, 6) : random_polytope3(rng, 7);
        Polytope Q = it < 4 ? random_polygon(rng, 5) : random_polytope3(rng, 6);
        Polytope S = minkowski_sum(P, Q);
        auto mc = oracle::mc_volume(S, 200000, 777 + static_cast<uint64_t>(it));
        REQUIRE(std::abs(mc.estimate - S.volume()) <= 4.0 * mc.stderrEstimate + 1e-12);
    }
}

TEST_CASE("Brunn-Minkowski and difference-body bounds on random pairs") {
    SeqRng rng(303);
    int symmetricSeen = 0;
    for (int it = 0; it < 200; ++it) {
        Polytope P = random_polygon(rng, 3 + it % 6);
        Polytope Q = random_polygon(rng, 3 + (it + 2) % 6);
        Polytope S = minkowski_sum(P, Q);
        Real lhs = std::sqrt(S.volume());
        Real rhs = std::sqrt(P.volume()) + std::sqrt(Q.volume());
        REQUIRE(lhs >= rhs - 1e-9);

        Polytope D = minkowski_sum(P, P.reflected());
        REQUIRE(D.volume() >= 4.0 * P.volume() - 1e-9);
        if (P.is_centrally_symmetric(1e-9)) {
            ++symmetricSeen;
            REQUIRE(D.volume() == Catch::Approx(4.0 * P.volume()).margin(1e-9));
        }
    }
    // random polygons are essentially never symmetric; the equality branch is
    // exercised separately
    Polytope K = make_box(Vec(2, -0.3, -0.9), Vec(2, 0.7, 0.1)).translated(Vec(2, -0.2, 0.4));
    REQUIRE(minkowski_sum(K, K.reflected()).volume() == Catch::Approx(4.0 * K.volume()).margin(1e-9));
    (void)symmetricSeen;
}

TEST_CASE("theta convolution body of two unit intervals") {
    Polytope K = make_box(Vec(1, 0), Vec(1, 1));
    ThetaBody tb = theta_convolution_body(K, K, 0.5, 64);
    REQUIRE(tb.maxSection == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(tb.x0[0] == Catch::Approx(1.0).margin(1e-9)); // tent peak on the node lattice
    // {x : 1-|x-1| >= 1/2} = [1/2, 3/2]
    REQUIRE(tb.mask.volume() == Catch::Approx(1.0).margin(2.5 / 64.0));
    Real lo = kPosInf, hi = kNegInf;
    for (long f = 0; f < tb.mask.geom.size(); ++f)
        if (tb.mask.on[static_cast<size_t>(f)]) {
            lo = std::min(lo, tb.mask.geom.point(f)[0]);
            hi = std::max(hi, tb.mask.geom.point(f)[0]);
        }
    REQUIRE(lo == Catch::Approx(0.5).margin(2.0 / 64.0));
    REQUIRE(hi == Catch::Approx(1.5).margin(2.0 / 64.0));
}

TEST_CASE("theta convolution body of the simplex against itself") {
    Polytope T = make_simplex(2);
    ThetaBody tb = theta_convolution_body(T, T, 1.0, 48);
    // max of |T cap (x - T)| sits at twice the centroid with value |T|*2/3
    REQUIRE(tb.maxSection == Catch::Approx(1.0 / 3.0).margin(0.01));
    REQUIRE(dist_inf(tb.x0, Vec(2, 2.0 / 3.0, 2.0 / 3.0)) <= 2.0 * 2.0 / 48.0);
    ThetaBody all = theta_convolution_body(T, T, 0.0, 48);
    // theta = 0 covers K+L = 2T
    REQUIRE(all.mask.volume() == Catch::Approx(2.0).margin(0.15));
}

TEST_CASE("theta convolution body input validation") {
    Polytope T = make_simplex(2);
    REQUIRE_THROWS_AS(theta_convolution_body(T, T, 0.5, 7), std::invalid_argument);
    REQUIRE_THROWS_AS(theta_convolution_body(T, T, 1.5, 32), std::invalid_argument);
    REQUIRE_THROWS_AS(theta_convolution_body(make_simplex(3), make_simplex(3), 0.5, 16), std::invalid_argument);
}

TEST_CASE("mask hulls and degenerate quermass conventions") {
    GridGeom g(2, Vec(2, 0, 0), {0.1, 0.1, 0}, {11, 11, 1});
    Mask m(g);
    for (long i = 0; i <= 10; ++i)
        for (long j = 0; j <= 10 - i; ++j) m.on[static_cast<size_t>(g.flat({i, j, 0}))] = 1;
    Polytope h = hull_of_mask(m);
    REQUIRE(h.full_dim());
    REQUIRE(h.volume() == Catch::Approx(0.5).margin(1e-12));

    std::vector<Vec> seg{Vec(2, 0, 0), Vec(2, 0.5, 0), Vec(2, 1, 0)};
    REQUIRE(quermass_w1_of_points(2, seg) == Catch::Approx(1.0).margin(1e-12));
    std::vector<Vec> pt{Vec(2, 0.3, 0.4)};
    REQUIRE(quermass_w1_of_points(2, pt) == 0.0);
    REQUIRE(quermass_w1_of_points(2, {}) == 0.0);
}

TEST_CASE("segment membership for degenerate polytopes") {
    Polytope seg = Polytope::from_points(2, {Vec(2, 0, 0), Vec(2, 1, 1)});
    REQUIRE(seg.contains(Vec(2, 0.5, 0.5), 1e-9));
    REQUIRE_FALSE(seg.contains(Vec(2, 0.5, 0.6), 1e-9));
}
