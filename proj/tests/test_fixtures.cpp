#include "daecanon/fixtures.hpp"

#include <cmath>

#include "daecanon/problem.hpp"
#include "doctest.h"

using namespace dae;

TEST_CASE("campbell_moore coefficient entries") {
    Fixture fx = campbell_moore(1.0);
    Matrix f0 = fx.pair.F.eval(0.0, fx.pair.params);
    CHECK(f0(6, 0) == doctest::Approx(2.0));  // 2 rho cos^2 t at t = 0
    Matrix e = fx.pair.E.eval(1.3, fx.pair.params);
    CHECK(rank_of(e) == 6);
    CHECK_THROWS_AS(campbell_moore(0.0), Error);

    // Omega is the rank-one orthoprojector onto im B.
    for (double t : {0.0, 0.9, 2.2}) {
        Matrix om = fx.Omega->eval(t, fx.pair.params);
        CHECK(projector_residual(om) < 1e-12);
        CHECK((om - om.transpose()).norm() < 1e-12);
        CHECK(rank_of(om) == 1);
    }
}

TEST_CASE("campbell_moore symbolic Omega' matches grid differences at 4th order") {
    Fixture fx = campbell_moore(1.0);
    auto err = [&](int n) {
        GridFunction om = fx.Omega->sample(0.0, 2.0, n, fx.pair.params);
        GridFunction sym = fx.Omega->derivative().sample(0.0, 2.0, n, fx.pair.params);
        return grid_distance(grid_derivative(om), sym);
    };
    CHECK(err(129) < 1e-5);
    CHECK(err(129) / err(257) >= 12.0);
}

TEST_CASE("campbell_moore closed-form C_Ncan and C_Scan have the right shape") {
    Fixture fx = campbell_moore(0.7);
    Matrix cn = fx.C_Ncan->eval(1.1, fx.pair.params);
    CHECK(cn.rows() == 7);
    CHECK(cn.cols() == 3);
    CHECK(rank_of(cn) == 3);
    Matrix cs = fx.C_Scan->eval(1.1, fx.pair.params);
    CHECK(cs.rows() == 7);
    CHECK(cs.cols() == 4);
    CHECK(rank_of(cs) == 4);
    // The two spans are complementary.
    Matrix stacked(7, 7);
    stacked.leftCols(4) = cs;
    stacked.rightCols(3) = cn;
    CHECK(rank_of(stacked) == 7);
}

TEST_CASE("gm86 solutions alpha(t) (t, 1) satisfy the DAE") {
    Fixture fx = gm86_example();
    GridFunction x = grid_from_fn(0.0, 1.0, 129, [](double t) -> Matrix {
        Matrix v(2, 1);
        v << std::sin(t) * t, std::sin(t);
        return v;
    });
    GridFunction xdot = grid_derivative(x);
    double worst = 0;
    for (int k = 0; k < x.points(); ++k) {
        double t = x.time_at(k);
        Matrix e = fx.pair.E.eval(t, fx.pair.params);
        Matrix f = fx.pair.F.eval(t, fx.pair.params);
        worst = std::max(worst, (e * xdot.at(k) + f * x.at(k)).norm());
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("plant_regular block bookkeeping") {
    // Profile (1, 0) in m = 3: a single J2 block.
    Fixture p1 = plant_regular(3, {1, 0}, 7);
    CHECK(p1.mu == 2);
    CHECK(p1.theta == std::vector<int>{1, 0});
    CHECK(p1.r == p1.d + 1);

    // Profile (2, 1, 0) in m = 8: one J3 and one J2.
    Fixture p2 = plant_regular(8, {2, 1, 0}, 8);
    CHECK(p2.mu == 3);
    CHECK(p2.r == p2.d + 3);  // (3-1) + (2-1) superdiagonal ones

    // Index-1 plant in m = 2 with one algebraic variable.
    Fixture p3 = plant_regular(2, {0}, 9);
    CHECK(p3.mu == 1);
    CHECK(p3.d + 1 <= 2);

    // Determinism per seed.
    Fixture a = plant_regular(6, {1, 1, 0}, 77);
    Fixture b = plant_regular(6, {1, 1, 0}, 77);
    CHECK((a.pair.E.eval(0, {}) - b.pair.E.eval(0, {})).norm() == 0.0);

    CHECK_THROWS_AS(plant_regular(3, {1, 2, 0}, 1), InvalidProfileError);
    CHECK_THROWS_AS(plant_regular(3, {1, 1}, 1), InvalidProfileError);
    CHECK_THROWS_AS(plant_regular(3, {0, 0}, 1), InvalidProfileError);
    CHECK_THROWS_AS(plant_regular(2, {2, 1, 0}, 1), InvalidProfileError);
}

TEST_CASE("every fixture's analyzed characteristics equal the expected ones") {
    std::vector<Fixture> fixtures;
    fixtures.push_back(campbell_moore(1.0));
    fixtures.push_back(semiexplicit_example(4, 2, 1));
    fixtures.push_back(plant_regular(5, {1, 0}, 2));
    fixtures.push_back(plant_regular(6, {2, 0}, 3, /*time_varying=*/true));
    for (const Fixture& fx : fixtures) {
        CAPTURE(fx.name);
        ReductionChain chain = reduce_full(fx.pair, 129);
        REQUIRE(chain.regular());
        CHECK(chain.mu == fx.mu);
        CHECK(chain.d == fx.d);
        CHECK(chain.theta_list() == fx.theta);
        CHECK(chain.r_list() == fx.r_list);
        Characteristics ch = derive_characteristics(chain);
        CHECK(ch.tractability == fx.tractability);
    }
}

TEST_CASE("fixtures export to the problem file format and reparse") {
    Fixture fx = semiexplicit_example(3, 2, 12);
    std::string text = write_problem(fx.pair);
    ProblemFile pf = parse_problem(text);
    ReductionChain chain = reduce_full(pf.pair, 65);
    REQUIRE(chain.regular());
    CHECK(chain.mu == 1);
    CHECK(chain.d == 2);

    Fixture cm = campbell_moore(1.0);
    ProblemFile pcm = parse_problem(write_problem(cm.pair));
    for (double t : {0.0, 0.4}) {
        CHECK((pcm.pair.E.eval(t, pcm.pair.params) - cm.pair.E.eval(t, cm.pair.params))
                  .norm() == 0.0);
        CHECK((pcm.pair.F.eval(t, pcm.pair.params) - cm.pair.F.eval(t, cm.pair.params))
                  .norm() == 0.0);
    }
}
