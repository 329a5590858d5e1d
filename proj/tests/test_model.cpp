#include <catch2/catch_amalgamated.hpp>

#include "logconv/model.hpp"
#include "logconv/oracle.hpp"
#include "logconv/rng.hpp"

using namespace logconv;

namespace {

LogConcaveModel exp_halfline() {
    // e^{-x} on [0, inf)
    return make_exp_cone(1.0, Vec(1, 1.0), Vec(1, 0.0), {Vec(1, -1.0)});
}

LogConcaveModel exp_quadrant() {
    // e^{-x-y} on the first quadrant
    return make_exp_cone(1.0, Vec(2, 1.0, 1.0), Vec(2, 0.0, 0.0),
                         {Vec(2, -1.0, 0.0), Vec(2, 0.0, -1.0)});
}

LogConcaveModel std_gaussian(int dim) { return make_gaussian(Vec(dim), SymMat::identity(dim)); }

} // namespace

TEST_CASE("indicator evaluation and sup norm") {
    LogConcaveModel f = make_indicator(make_simplex(2), 2.5);
    REQUIRE(evaluate(f, Vec(2, 0.25, 0.25)) == 2.5);
    REQUIRE(evaluate(f, Vec(2, 0.75, 0.75)) == 0.0);
    REQUIRE(sup_norm(f) == 2.5);
    REQUIRE(integral_exact(f) == Catch::Approx(2.5 * 0.5).margin(1e-12));
    REQUIRE_THROWS_AS(evaluate(f, Vec(3, 0, 0, 0)), std::invalid_argument);
}

TEST_CASE("degenerate supports are rejected") {
    Polytope seg = Polytope::from_points(2, {Vec(2, 0, 0), Vec(2, 1, 0)});
    REQUIRE_THROWS_AS(make_indicator(seg), std::invalid_argument);
    SymMat bad = SymMat::identity(2);
    bad.a[1][1] = -1.0;
    REQUIRE_THROWS_AS(make_gaussian(Vec(2), bad), std::invalid_argument);
}

TEST_CASE("exponential model on the half-line") {
    LogConcaveModel f = exp_halfline();
    REQUIRE(evaluate(f, Vec(1, 0.5)) == Catch::Approx(std::exp(-0.5)).margin(1e-15));
    REQUIRE(evaluate(f, Vec(1, -0.1)) == 0.0);
    REQUIRE(sup_norm(f) == 1.0);
    REQUIRE(integral_exact(f) == Catch::Approx(oracle::closed_form("exp_cone_integral_1d")).margin(1e-12));
}

TEST_CASE("exponential model on the quadrant") {
    LogConcaveModel f = exp_quadrant();
    REQUIRE(evaluate(f, Vec(2, 1.0, 2.0)) == Catch::Approx(std::exp(-3.0)).margin(1e-15));
    REQUIRE(evaluate(f, Vec(2, -0.5, 1.0)) == 0.0);
    // integral of e^{-x-y} over the quadrant is 1
    REQUIRE(integral_exact(f) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("non-integrable slopes are rejected") {
    REQUIRE_THROWS_AS(make_exp_cone(1.0, Vec(2, 1.0, -1.0), Vec(2, 0.0, 0.0),
                                    {Vec(2, -1.0, 0.0), Vec(2, 0.0, -1.0)}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(make_exp_cone(1.0, Vec(1, -1.0), Vec(1, 0.0), {Vec(1, -1.0)}),
                      std::invalid_argument);
}

TEST_CASE("gaussian evaluation and mass") {
    LogConcaveModel f = std_gaussian(2);
    REQUIRE(evaluate(f, Vec(2, 0, 0)) == 1.0);
    REQUIRE(evaluate(f, Vec(2, 1, 1)) == Catch::Approx(std::exp(-1.0)).margin(1e-15));
    REQUIRE(integral_exact(f) == Catch::Approx(2.0 * M_PI).margin(1e-12));
    Real g1 = integral_exact(std_gaussian(1));
    REQUIRE(g1 == Catch::Approx(oracle::closed_form("gauss_integral_1d")).margin(1e-12));
}

TEST_CASE("reflection is an involution and matches pointwise mirroring") {
    SeqRng rng(11);
    std::vector<LogConcaveModel> models;
    models.push_back(make_indicator(make_simplex(2)));
    models.push_back(exp_quadrant());
    models.push_back(make_gaussian(Vec(2, 0.3, -0.2), SymMat::identity(2), 0.7));
    models.push_back(make_grid_model(rasterize(std_gaussian(1), 64)));
    for (const auto& m : models) {
        LogConcaveModel r = reflect(m);
        LogConcaveModel rr = reflect(r);
        int d = model_dim(m);
        for (int it = 0; it < 1000; ++it) {
            Vec x(d);
            for (int i = 0; i < d; ++i) x[i] = rng.uniform(-2.0, 2.0);
            REQUIRE(evaluate(r, x) == Catch::Approx(evaluate(m, -x)).margin(1e-12));
            REQUIRE(evaluate(rr, x) == Catch::Approx(evaluate(m, x)).margin(1e-12));
        }
    }
}

TEST_CASE("truncation boxes carry all but epsTail of the mass") {
    Real eps = 1e-6;
    Box bg = default_box(std_gaussian(1), eps);
    Real r = bg.hi[0];
    REQUIRE(modeldetail::chi2_tail(1, r) <= eps);
    REQUIRE(modeldetail::chi2_tail(1, r) >= 0.9 * eps); // box is tight, not padded
    REQUIRE(bg.lo[0] == Catch::Approx(-r).margin(1e-12));

    Box be = default_box(exp_halfline(), eps);
    REQUIRE(be.lo[0] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(be.hi[0] == Catch::Approx(std::log(1e6)).margin(1e-3));

    Box bi = default_box(make_indicator(make_simplex(2)), eps);
    REQUIRE(bi.lo[0] == 0.0);
    REQUIRE(bi.hi[1] == 1.0);

    REQUIRE_THROWS_AS(default_box(std_gaussian(1), 0.0), std::invalid_argument);
}

TEST_CASE("rasterization of an indicator is exact") {
    LogConcaveModel f = make_indicator(make_box(Vec(1, 0.0), Vec(1, 1.0)));
    GridFunction g = rasterize(f, Box{Vec(1, 0.0), Vec(1, 1.0)}, 8);
    REQUIRE(g.geom.shape[0] == 8);
    REQUIRE(g.integral() == 1.0); // 8 cells of width 1/8, all inside
    REQUIRE(g.sup() == 1.0);
    REQUIRE(is_support_grid_convex(g));
}

TEST_CASE("rasterize rejects boxes that miss mass and tiny resolutions") {
    LogConcaveModel f = std_gaussian(1);
    REQUIRE_THROWS_AS(rasterize(f, Box{Vec(1, -2.0), Vec(1, 2.0)}, 64), std::invalid_argument);
    REQUIRE_THROWS_AS(rasterize(f, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(rasterize(std_gaussian(3), 16), std::invalid_argument); // grids are 1D/2D
}

TEST_CASE("rasterized mass converges monotonically to the closed form") {
    // epsTail well below the discretization error at the finest grid, so the
    // truncated tail cannot mask the midpoint-rule convergence.  For the
    // Gaussian the midpoint sum converges spectrally, so once the error dips
    // under 1e-9 it is numerical noise and the ordering is not meaningful.
    for (const LogConcaveModel& m : {std_gaussian(1), exp_halfline()}) {
        Real target = integral_exact(m);
        Real prev = kPosInf;
        for (long n : {64L, 128L, 256L}) {
            Real err = std::abs(rasterize(m, n, 1e-12).integral() - target);
            REQUIRE((err < prev + 1e-15 || err < 1e-9 * target));
            prev = err;
        }
        REQUIRE(prev <= 0.01 * target);
    }
}

TEST_CASE("rasterized closed-form models pass the midpoint log-concavity test") {
    SymMat aniso = SymMat::identity(2);
    aniso.a[0][0] = 0.5;
    aniso.a[0][1] = aniso.a[1][0] = 0.2;
    for (const LogConcaveModel& m :
         {std_gaussian(2), make_gaussian(Vec(2, 0.1, -0.3), aniso), exp_quadrant(),
          make_indicator(make_simplex(2))}) {
        GridFunction g = rasterize(m, 48);
        REQUIRE(is_log_concave_midpoint(g));
        REQUIRE(is_support_grid_convex(g));
    }
}

TEST_CASE("violations of log-concavity and support convexity are flagged") {
    GridGeom geom(1, Vec(1, 0.0), {0.1, 0, 0}, {9, 1, 1});
    std::vector<Real> bimodal(9, kNegInf);
    bimodal[1] = 0.0;
    bimodal[4] = -3.0;
    bimodal[7] = 0.0; // dip in the middle
    GridFunction g(geom, bimodal);
    REQUIRE_FALSE(is_log_concave_midpoint(g));

    std::vector<Real> holed(9, 0.0);
    holed[4] = kNegInf;
    GridFunction h(geom, holed);
    REQUIRE_FALSE(is_support_grid_convex(h));
}

TEST_CASE("exact superlevel sets") {
    REQUIRE(exact_superlevel(exp_halfline(), std::exp(-2.0)).volume() == Catch::Approx(2.0).margin(1e-9));
    REQUIRE(exact_superlevel(make_indicator(make_simplex(2)), 0.5).volume() == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(exact_superlevel_volume(std_gaussian(2), std::exp(-0.5)) == Catch::Approx(M_PI).margin(1e-12));
    REQUIRE_THROWS_AS(exact_superlevel(std_gaussian(2), 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(exact_superlevel(exp_halfline(), 0.0), std::invalid_argument);
}

TEST_CASE("grid models evaluate by nearest node") {
    GridFunction g = rasterize(make_indicator(make_box(Vec(1, 0.0), Vec(1, 1.0))), 10);
    LogConcaveModel m = make_grid_model(g);
    REQUIRE(evaluate(m, Vec(1, 0.5)) == 1.0);
    REQUIRE(evaluate(m, Vec(1, 3.0)) == 0.0);
    REQUIRE(sup_norm(m) == 1.0);
}
