#include "daecanon/pencil.hpp"

#include "daecanon/fixtures.hpp"
#include "daecanon/rng.hpp"
#include "doctest.h"

using namespace dae;

TEST_CASE("is_regular_pencil") {
    CHECK(is_regular_pencil(Matrix::Identity(3, 3), Matrix::Zero(3, 3)));
    CHECK_FALSE(is_regular_pencil(Matrix::Zero(2, 2), Matrix::Zero(2, 2)));

    Fixture cm = campbell_moore(1.0);
    Matrix e0 = cm.pair.E.eval(0.0, cm.pair.params);
    Matrix f0 = cm.pair.F.eval(0.0, cm.pair.params);
    CHECK(is_regular_pencil(e0, f0));

    // Singular pencil: E = F = diag(1, 0) has det(lambda E + F) == 0.
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1;
    CHECK_FALSE(is_regular_pencil(d, d));
}

TEST_CASE("wong_sequences hand cases") {
    auto [v, w] = wong_sequences(Matrix::Identity(3, 3), Matrix::Zero(3, 3));
    CHECK(v.dim() == 3);
    CHECK(w.dim() == 0);

    Matrix e(2, 2), f(2, 2);
    e << 0, 1, 0, 0;
    f = Matrix::Identity(2, 2);
    auto [v2, w2] = wong_sequences(e, f);
    CHECK(v2.dim() == 0);
    CHECK(w2.dim() == 2);
}

TEST_CASE("quasi_weierstrass decoupled cases") {
    Matrix a(3, 3);
    a << 1, 2, 0, 0, 1, 1, 0, 0, -1;
    PencilForm f1 = quasi_weierstrass(Matrix::Identity(3, 3), a);
    CHECK(f1.d == 3);
    CHECK(f1.mu == 0);
    CHECK((f1.Pi_can - Matrix::Identity(3, 3)).norm() < 1e-10);

    Matrix e = Matrix::Zero(2, 2);
    e(0, 0) = 1;
    PencilForm f2 = quasi_weierstrass(e, Matrix::Identity(2, 2));
    CHECK(f2.d == 1);
    CHECK(f2.mu == 1);
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 1;
    CHECK((f2.Pi_can - expected).norm() < 1e-10);

    CHECK_THROWS_AS(quasi_weierstrass(Matrix::Zero(2, 2), Matrix::Zero(2, 2)),
                    NotRegularError);
}

TEST_CASE("quasi-Weierstrass block identities on planted pairs") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
        Fixture fx = plant_regular(6, {2, 1, 0}, seed);
        Matrix e = fx.pair.E.eval(0.0, fx.pair.params);
        Matrix f = fx.pair.F.eval(0.0, fx.pair.params);
        PencilForm form = quasi_weierstrass(e, f);
        CHECK(form.d == fx.d);
        CHECK(form.mu == fx.mu);
        const int m = form.m, d = form.d;
        Matrix set = form.S * e * form.T;
        Matrix sft = form.S * f * form.T;
        Matrix set_expect = Matrix::Zero(m, m);
        set_expect.topLeftCorner(d, d) = Matrix::Identity(d, d);
        set_expect.bottomRightCorner(m - d, m - d) = form.N_block;
        Matrix sft_expect = Matrix::Zero(m, m);
        sft_expect.topLeftCorner(d, d) = form.W_block;
        sft_expect.bottomRightCorner(m - d, m - d) = Matrix::Identity(m - d, m - d);
        CHECK((set - set_expect).norm() < 1e-9 * (1 + e.norm()));
        CHECK((sft - sft_expect).norm() < 1e-9 * (1 + f.norm()));
        // Spectral projector matches the plant.
        CHECK((form.Pi_can - *fx.Pi_can_planted).norm() < 1e-8);
        // ker E is always inside N_can.
        CHECK(inclusion_residual(onb_nullspace(e).columns, form.N_can) < 1e-8);
    }
}

TEST_CASE("Pi_can is invariant under constant equivalence") {
    SplitMix64 rng(99);
    Fixture fx = plant_regular(5, {1, 0}, 42);
    Matrix e = fx.pair.E.eval(0.0, fx.pair.params);
    Matrix f = fx.pair.F.eval(0.0, fx.pair.params);
    PencilForm base = quasi_weierstrass(e, f);
    for (int it = 0; it < 10; ++it) {
        Matrix l(5, 5), k(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                l(i, j) = rng.uniform(-1.0, 1.0) + (i == j ? 3.0 : 0.0);
                k(i, j) = rng.uniform(-1.0, 1.0) + (i == j ? 3.0 : 0.0);
            }
        PencilForm conj = quasi_weierstrass(l * e * k, l * f * k);
        CHECK(conj.d == base.d);
        CHECK(conj.mu == base.mu);
        // Subspaces transform by K^{-1}; the projector of the transformed
        // pair is K^{-1} Pi K.
        Matrix k_inv = k.fullPivLu().inverse();
        CHECK((conj.Pi_can - k_inv * base.Pi_can * k).norm() < 1e-8 * (1 + base.Pi_can.norm()));
    }
}

TEST_CASE("jordan_block_counts") {
    auto plant_form = [](const Matrix& nblock, int d) {
        int nil = static_cast<int>(nblock.rows());
        int m = d + nil;
        Matrix e = Matrix::Zero(m, m);
        e.topLeftCorner(d, d) = Matrix::Identity(d, d);
        e.bottomRightCorner(nil, nil) = nblock;
        Matrix f = Matrix::Zero(m, m);
        f.topLeftCorner(d, d) = 0.5 * Matrix::Identity(d, d);
        f.bottomRightCorner(nil, nil) = Matrix::Identity(nil, nil);
        return quasi_weierstrass(e, f);
    };

    Matrix j2 = Matrix::Zero(2, 2);
    j2(0, 1) = 1;
    CHECK(jordan_block_counts(plant_form(j2, 1)) == std::vector<int>{1});

    CHECK(jordan_block_counts(plant_form(Matrix::Zero(2, 2), 1)).empty());

    Matrix j32 = Matrix::Zero(5, 5);
    j32(0, 1) = 1;
    j32(1, 2) = 1;
    j32(3, 4) = 1;
    CHECK(jordan_block_counts(plant_form(j32, 2)) == std::vector<int>{2, 1});
}

TEST_CASE("solve_constant_ivp on decoupled cases") {
    // E = I, F = 0, q = 0: constant trajectory.
    ExprMatrix q0(2, 1);
    Vector xa(2);
    xa << 1.5, -2.0;
    Trajectory t0 = solve_constant_ivp(Matrix::Identity(2, 2), Matrix::Zero(2, 2), q0, xa,
                                       0.0, 1.0, 33);
    for (const auto& s : t0.states) CHECK((s - xa).norm() < 1e-12);

    // Nilpotent pair N v' + v = g with N = J2: x = (g1 - g2', g2).
    Matrix e(2, 2), f(2, 2);
    e << 0, 1, 0, 0;
    f = Matrix::Identity(2, 2);
    ExprMatrix q(2, 1);
    q.at(0, 0) = parse_expr("sin(t)");
    q.at(1, 0) = parse_expr("t^2");
    Trajectory tr = solve_constant_ivp(e, f, q, Vector::Zero(2), 0.0, 2.0, 65);
    for (int k = 0; k < tr.points(); ++k) {
        double t = tr.times[static_cast<std::size_t>(k)];
        CHECK(tr.states[static_cast<std::size_t>(k)](0) ==
              doctest::Approx(std::sin(t) - 2 * t).epsilon(1e-10));
        CHECK(tr.states[static_cast<std::size_t>(k)](1) == doctest::Approx(t * t));
    }
}

TEST_CASE("solve_constant_ivp residual on planted pairs with polynomial q") {
    SplitMix64 rng(1234);
    for (std::uint64_t seed : {10ull, 11ull, 12ull}) {
        Fixture fx = plant_regular(6, {1, 1, 0}, seed);
        Matrix e = fx.pair.E.eval(0.0, fx.pair.params);
        Matrix f = fx.pair.F.eval(0.0, fx.pair.params);
        ExprMatrix q(6, 1);
        Expr t = Expr::time();
        for (int i = 0; i < 6; ++i)
            q.at(i, 0) = Expr::literal(rng.uniform(-1.0, 1.0)) +
                         Expr::literal(rng.uniform(-1.0, 1.0)) * t +
                         Expr::literal(rng.uniform(-0.5, 0.5)) * t.pow(3);
        Vector xa(6);
        for (int i = 0; i < 6; ++i) xa(i) = rng.uniform(-1.0, 1.0);
        Trajectory tr = solve_constant_ivp(e, f, q, xa, 0.0, 1.0, 257);
        double worst = 0;
        for (double r : tr.residual) worst = std::max(worst, r);
        CHECK(worst < 1e-6);

        // The solution restricted to the flow: homogeneous runs stay in S_can.
        ExprMatrix qz(6, 1);
        Trajectory hom = solve_constant_ivp(e, f, qz, xa, 0.0, 1.0, 129);
        PencilForm form = quasi_weierstrass(e, f);
        double inc = 0;
        for (const auto& s : hom.states)
            inc = std::max(inc, inclusion_residual(s, form.S_can));
        CHECK(inc < 1e-7);
        // And the initial condition honors Pi_can x(a) = Pi_can x_a.
        CHECK((form.Pi_can * hom.states.front() - form.Pi_can * xa).norm() < 1e-9);
    }
}
