#pragma once

#include <optional>

#include "daecanon/characteristics.hpp"
#include "daecanon/problem.hpp"

namespace dae {

/// A golden problem: coefficient pair plus everything we know about it in
/// closed form. Expected integers are exact; expected matrices are
/// expression matrices evaluated where needed.
struct Fixture {
    std::string name;
    CoefficientPair pair;

    bool expect_regular = true;
    int not_preregular_level = -1;  // when !expect_regular
    int mu = -1;
    int d = -1;
    int r = -1;
    std::vector<int> theta;
    std::vector<int> r_list;
    std::vector<int> tractability;

    // Campbell--Moore closed forms (admissible sequence and canonical data).
    std::optional<ExprMatrix> Omega, G1, Q1, Pi1, G2, Pi2, Pi2_wrong;
    std::optional<ExprMatrix> C_Ncan, C_Scan, H;
    std::optional<Matrix> G0_displayed;  // the worked 4 x 7 IC matrix at t = 0

    // Plants: conjugation data for oracle comparisons.
    std::optional<Matrix> Pi_can_planted;    // constant case
    std::optional<ExprMatrix> K_transform;   // time-varying case: X(t) = K(t)^{-1} X K(t)
};

/// The linearized Campbell--Moore DAE: m = 7, index 3, d = 4, on [0, 4].
/// rho must be nonzero.
Fixture campbell_moore(double rho);

/// Same pair on a caller-chosen interval (the trigonometric coefficients
/// are entire, so analyses may run on shifted or padded windows).
Fixture campbell_moore(double rho, double t0, double t1);

/// The classical 2 x 2 pair with E(t) = [[-t, t^2], [-1, t]], F = I: it is
/// pre-regular but the level-1 pair degenerates to {0, 0}.
Fixture gm86_example();

/// Constant pair planted in quasi-Weierstrass form with the Jordan
/// structure realizing theta_profile, conjugated by seeded well-conditioned
/// transforms (polynomial time-varying ones when requested).
Fixture plant_regular(int m, const std::vector<int>& theta_profile, std::uint64_t seed,
                      bool time_varying = false);

/// Smooth random semi-explicit index-1 template with diagonally dominant
/// F22 on [0, 1].
Fixture semiexplicit_example(int m, int r, std::uint64_t seed);

}  // namespace dae
