#include "daecanon/ivp.hpp"

#include "daecanon/fixtures.hpp"
#include "daecanon/pencil.hpp"
#include "daecanon/rng.hpp"
#include "doctest.h"

using namespace dae;

namespace {

struct SemiSetup {
    Fixture fx;
    ReductionChain chain;
    CanonicalFrame frame;
};

SemiSetup make_semi(int m, int r, std::uint64_t seed, int n = 129) {
    Fixture fx = semiexplicit_example(m, r, seed);
    ReductionChain chain = reduce_full(fx.pair, n);
    REQUIRE(chain.regular());
    ReductionChain adj = reduce_full(adjoint_pair(fx.pair), n);
    CanonicalFrame frame = canonical_frame(fx.pair, chain, adj);
    return {std::move(fx), std::move(chain), std::move(frame)};
}

}  // namespace

TEST_CASE("solve_homogeneous honors the flow and the accurate IC") {
    SemiSetup s = make_semi(4, 2, 100);
    SplitMix64 rng(5);

    // x_a already on the flow: x(a) = x_a.
    Vector xi(2);
    xi << 0.7, -0.4;
    Vector xa_flow = s.frame.C_Scan.at(0) * xi;
    Trajectory t1 = solve_homogeneous(s.fx.pair, s.chain, s.frame, 0.0, xa_flow);
    CHECK((t1.states.front() - xa_flow).norm() < 1e-9);

    // x_a in N_can: the zero solution.
    Vector xa_null = s.frame.C_Ncan.at(0) * Vector::Ones(2);
    Trajectory t2 = solve_homogeneous(s.fx.pair, s.chain, s.frame, 0.0, xa_null);
    for (const auto& st : t2.states) CHECK(st.norm() < 1e-9);

    // Random x_a: Pi x(a) = Pi x_a, trajectory satisfies the DAE.
    Vector xa(4);
    for (int i = 0; i < 4; ++i) xa(i) = rng.uniform(-1.0, 1.0);
    Trajectory t3 = solve_homogeneous(s.fx.pair, s.chain, s.frame, 0.0, xa);
    Matrix pi0 = s.frame.Pi_can.at(0);
    CHECK((pi0 * t3.states.front() - pi0 * xa).norm() < 1e-8);
    double worst = 0;
    for (double rres : t3.residual) worst = std::max(worst, rres);
    CHECK(worst < 1e-6);
}

TEST_CASE("uniqueness under a different accurate IC matrix") {
    SemiSetup s = make_semi(5, 3, 41);
    Vector xa(5);
    xa << 0.3, -0.8, 0.2, 1.0, -0.5;
    Trajectory base = solve_homogeneous(s.fx.pair, s.chain, s.frame, 0.0, xa);
    // Any row remix of G_a keeps the kernel, hence the solution.
    Matrix g = ic_matrix(s.frame, 0.0);
    Matrix remix(3, 3);
    remix << 2, 1, 0, 0, 1, -1, 1, 0, 3;
    Trajectory other = solve_homogeneous_ic(s.fx.pair, s.chain, remix * g, 0.0, xa);
    double worst = 0;
    for (int k = 0; k < base.points(); ++k)
        worst = std::max(worst, (base.states[static_cast<std::size_t>(k)] -
                                 other.states[static_cast<std::size_t>(k)])
                                    .norm());
    CHECK(worst < 1e-8);
}

TEST_CASE("semi-explicit closed form vs generic solve") {
    SemiSetup s = make_semi(4, 2, 55);
    Vector xa1(2);
    xa1 << 1.0, -0.3;
    ExprMatrix qz(4, 1);
    Trajectory closed =
        solve_semiexplicit_index1(s.fx.pair.F, 2, qz, 0.0, 1.0, 129, s.fx.pair.params, 0.0,
                                  xa1);
    Vector xa(4);
    xa << xa1(0), xa1(1), 0.0, 0.0;  // x2 components are free; IC fixes x1 only
    Trajectory generic = solve_homogeneous(s.fx.pair, s.chain, s.frame, 0.0, xa);
    double worst = 0;
    for (int k = 0; k < closed.points(); ++k)
        worst = std::max(worst, (closed.states[static_cast<std::size_t>(k)] -
                                 generic.states[static_cast<std::size_t>(k)])
                                    .norm());
    CHECK(worst < 1e-7);
}

TEST_CASE("semi-explicit decoupled blocks and inhomogeneous residual") {
    // F12 = 0, F21 = 0: x2 = F22^{-1} q2 pointwise.
    ExprMatrix f(3, 3);
    f.at(0, 0) = parse_expr("1 + sin(t)/2");
    f.at(1, 1) = parse_expr("2");
    f.at(2, 2) = parse_expr("2 + cos(t)");
    ExprMatrix q(3, 1);
    q.at(0, 0) = parse_expr("sin(t)");
    q.at(1, 0) = parse_expr("t");
    q.at(2, 0) = parse_expr("cos(t)");
    Vector xa1(1);
    xa1 << 0.5;
    Trajectory tr = solve_semiexplicit_index1(f, 1, q, 0.0, 1.0, 65, {}, 0.0, xa1);
    for (int k = 0; k < tr.points(); ++k) {
        double t = tr.times[static_cast<std::size_t>(k)];
        CHECK(tr.states[static_cast<std::size_t>(k)](1) == doctest::Approx(t / 2.0));
        CHECK(tr.states[static_cast<std::size_t>(k)](2) ==
              doctest::Approx(std::cos(t) / (2 + std::cos(t))));
    }

    // Random smooth instance: full-DAE residual stays at solver accuracy.
    Fixture fx = semiexplicit_example(4, 2, 202);
    ExprMatrix q2(4, 1);
    q2.at(0, 0) = parse_expr("sin(2*t)");
    q2.at(1, 0) = parse_expr("t^2-1");
    q2.at(2, 0) = parse_expr("cos(t)");
    q2.at(3, 0) = parse_expr("t");
    Vector xa(2);
    xa << -0.2, 0.9;
    Trajectory tr2 =
        solve_semiexplicit_index1(fx.pair.F, 2, q2, 0.0, 1.0, 129, fx.pair.params, 0.0, xa);
    double worst = 0;
    for (double r : tr2.residual) worst = std::max(worst, r);
    CHECK(worst < 1e-6);

    ExprMatrix fsing(2, 2);
    fsing.at(0, 0) = parse_expr("1");
    fsing.at(1, 1) = parse_expr("t - 1/2");  // crosses zero inside [0, 1]
    CHECK_THROWS_AS(
        solve_semiexplicit_index1(fsing, 1, ExprMatrix(2, 1), 0.0, 1.0, 65, {}, 0.0, xa1),
        SingularF22Error);
}

TEST_CASE("maximal fundamental matrix properties") {
    SemiSetup s = make_semi(4, 2, 61);
    GridFunction x = maximal_fundamental(s.fx.pair, s.chain, s.frame, 0.0);
    CHECK((x.at(0) - s.frame.Pi_can.at(0)).norm() < 1e-9);
    for (int k : {0, 64, 128}) {
        CHECK(rank_of(x.at(k)) == 2);
        // im X(t) = S_can(t), ker X(t) = N_can(a).
        CHECK(subspace_gap(onb_range(x.at(k)), orthonormalize(s.frame.C_Scan.at(k))) <
              1e-7);
        CHECK(subspace_gap(onb_nullspace(x.at(k)), SubspaceBasis(s.frame.C_Ncan.at(0))) <
              1e-7);
    }
}

TEST_CASE("constant pair: generic homogeneous solve agrees with the pencil formula") {
    Fixture fx = plant_regular(5, {1, 0}, 1001);
    ReductionChain chain = reduce_full(fx.pair, 129);
    REQUIRE(chain.regular());
    ReductionChain adj = reduce_full(adjoint_pair(fx.pair), 129);
    CanonicalFrame frame = canonical_frame(fx.pair, chain, adj);
    Matrix e = fx.pair.E.eval(0, fx.pair.params);
    Matrix f = fx.pair.F.eval(0, fx.pair.params);
    Vector xa(5);
    xa << 0.4, -1.0, 0.7, 0.1, -0.6;
    Trajectory generic = solve_homogeneous(fx.pair, chain, frame, 0.0, xa);
    Trajectory pencil_route =
        solve_constant_ivp(e, f, ExprMatrix(5, 1), xa, 0.0, 1.0, 129);
    double worst = 0;
    for (int k = 0; k < generic.points(); ++k)
        worst = std::max(worst, (generic.states[static_cast<std::size_t>(k)] -
                                 pencil_route.states[static_cast<std::size_t>(k)])
                                    .norm());
    CHECK(worst < 1e-6);
}

TEST_CASE("perturbation study: zero perturbation and eps stability") {
    SemiSetup s = make_semi(4, 2, 71);
    Vector xa(4);
    xa << 1.0, 0.2, -0.3, 0.5;
    PerturbationStudy study = perturbation_study(s.fx.pair, s.chain, s.frame, 0.0, xa, 4,
                                                 {1e-3, 1e-5, 1e-7});
    CHECK(study.finite);
    CHECK(study.max_rel_spread < 0.01);

    // The inaccurate S(a)-perp condition with F21 != 0 recovers a different
    // solution when only the x2 part of the data changes.
    Matrix c0 = s.frame.C_Scan.at(0);
    Matrix g_wrong = c0.transpose();  // condition C(a)^* (x(a) - x_a) = 0
    Vector xa_b = xa;
    xa_b(2) += 0.7;
    xa_b(3) -= 0.4;  // same x1 part, different x2 part
    Trajectory acc_a = solve_homogeneous(s.fx.pair, s.chain, s.frame, 0.0, xa);
    Trajectory acc_b = solve_homogeneous(s.fx.pair, s.chain, s.frame, 0.0, xa_b);
    Trajectory wrong_a = solve_homogeneous_ic(s.fx.pair, s.chain, g_wrong, 0.0, xa);
    Trajectory wrong_b = solve_homogeneous_ic(s.fx.pair, s.chain, g_wrong, 0.0, xa_b);
    double acc_gap = 0, wrong_gap = 0;
    for (int k = 0; k < acc_a.points(); ++k) {
        acc_gap = std::max(acc_gap, (acc_a.states[static_cast<std::size_t>(k)] -
                                     acc_b.states[static_cast<std::size_t>(k)])
                                        .norm());
        wrong_gap = std::max(wrong_gap, (wrong_a.states[static_cast<std::size_t>(k)] -
                                         wrong_b.states[static_cast<std::size_t>(k)])
                                            .norm());
    }
    CHECK(acc_gap < 1e-8);     // accurate condition fixes x1(a) only
    CHECK(wrong_gap > 1e-3);   // the S-perp condition leaks x2 data
}

TEST_CASE("trajectory CSV export") {
    SemiSetup s = make_semi(4, 2, 81, 33);
    Vector xa = Vector::Zero(4);
    xa(0) = 1;
    Trajectory tr = solve_homogeneous(s.fx.pair, s.chain, s.frame, 0.0, xa);
    std::string csv = tr.to_csv();
    CHECK(csv.rfind("t,x1,x2,x3,x4,residual\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 34);
}
