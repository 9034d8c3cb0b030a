#include "daecanon/fixtures.hpp"

#include <cmath>

#include "daecanon/rng.hpp"

namespace dae {

namespace {

void place(ExprMatrix& dst, int i0, int j0, const ExprMatrix& src) {
    for (int i = 0; i < src.rows(); ++i)
        for (int j = 0; j < src.cols(); ++j) dst.at(i0 + i, j0 + j) = src.at(i, j);
}

ExprMatrix neg(const ExprMatrix& m) { return m.scaled(Expr::literal(-1.0)); }

double gaussian(SplitMix64& rng) {
    double u1 = rng.uniform();
    double u2 = rng.uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Matrix random_orthogonal(int n, SplitMix64& rng) {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = gaussian(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    // Fix the sign convention so the factor is deterministic.
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

Matrix random_well_conditioned(int n, SplitMix64& rng) {
    Matrix q1 = random_orthogonal(n, rng);
    Matrix q2 = random_orthogonal(n, rng);
    Vector sigma(n);
    for (int i = 0; i < n; ++i) sigma(i) = rng.uniform(0.6, 1.6);
    return q1 * sigma.asDiagonal() * q2;
}

}  // namespace

Fixture campbell_moore(double rho) { return campbell_moore(rho, 0.0, 4.0); }

Fixture campbell_moore(double rho, double t0, double t1) {
    if (rho == 0.0) throw Error("campbell_moore: rho must be nonzero");
    Fixture fx;
    fx.name = "campbell-moore";

    Expr t = Expr::time();
    Expr s = sin(t), c = cos(t);
    Expr rh = Expr::param("rho");
    Expr two = Expr::literal(2.0);

    ExprMatrix B(3, 1);
    B.at(0, 0) = -(two * rh * c.pow(2));
    B.at(1, 0) = -(two * rh * s * c);
    B.at(2, 0) = two * rh * s;

    ExprMatrix A(3, 3);
    A.at(0, 1) = Expr::literal(1.0);
    A.at(0, 2) = -c;
    A.at(1, 0) = Expr::literal(-1.0);
    A.at(1, 2) = -s;

    ExprMatrix Cblk(3, 3);
    Cblk.at(0, 2) = s;
    Cblk.at(1, 2) = -c;
    Cblk.at(2, 2) = Expr::literal(1.0);

    ExprMatrix I3 = ExprMatrix::identity(3);

    CoefficientPair pair;
    pair.m = 7;
    pair.t0 = t0;
    pair.t1 = t1;
    pair.params["rho"] = rho;
    pair.E = ExprMatrix(7, 7);
    for (int i = 0; i < 6; ++i) pair.E.at(i, i) = Expr::literal(1.0);
    pair.F = ExprMatrix(7, 7);
    place(pair.F, 0, 3, neg(I3));
    place(pair.F, 3, 0, Cblk);
    place(pair.F, 3, 3, A);
    place(pair.F, 3, 6, B);
    place(pair.F, 6, 0, neg(B.transpose()));
    fx.pair = pair;

    fx.mu = 3;
    fx.d = 4;
    fx.r = 6;
    fx.theta = {1, 1, 0};
    fx.r_list = {6, 5, 4};
    fx.tractability = {6, 6, 6, 7};

    Expr inv4r2 = Expr::literal(1.0) / (Expr::literal(4.0) * rh.pow(2));
    ExprMatrix Omega = (B * B.transpose()).scaled(inv4r2);
    ExprMatrix Omega1 = Omega.derivative();
    ExprMatrix Omega2 = Omega1.derivative();
    ExprMatrix ImO = I3 - Omega;

    ExprMatrix G1(7, 7);
    place(G1, 0, 0, I3);
    place(G1, 3, 3, I3);
    place(G1, 3, 6, B);

    ExprMatrix Q1(7, 7);
    place(Q1, 3, 3, Omega);
    place(Q1, 6, 3, neg(B.transpose().scaled(inv4r2)));

    ExprMatrix Pi1(7, 7);
    place(Pi1, 0, 0, I3);
    place(Pi1, 3, 3, ImO);

    ExprMatrix G2(7, 7);
    place(G2, 0, 0, I3);
    place(G2, 0, 3, neg(Omega));
    place(G2, 3, 3, I3 + A * Omega + Omega1 * Omega);
    place(G2, 3, 6, B);

    ExprMatrix Pi2(7, 7);
    place(Pi2, 0, 0, ImO);
    place(Pi2, 3, 0, ImO * A * Omega + Omega1 * Omega);
    place(Pi2, 3, 3, ImO);

    ExprMatrix Pi2w(7, 7);
    place(Pi2w, 0, 0, ImO);
    place(Pi2w, 3, 0, Omega1 * Omega);
    place(Pi2w, 3, 3, ImO);

    ExprMatrix CN(7, 3);
    place(CN, 0, 0, B);
    place(CN, 3, 0, neg((ImO * A + Omega1) * B));
    place(CN, 3, 1, B);
    CN.at(6, 2) = Expr::literal(1.0);

    ExprMatrix H(2, 3);
    H.at(0, 0) = s;
    H.at(0, 1) = -c;
    H.at(1, 1) = Expr::literal(1.0);
    H.at(1, 2) = c;
    ExprMatrix CB = H.transpose();

    ExprMatrix K1 = (B.transpose() * (Omega1.scaled(Expr::literal(2.0)) - A) * CB)
                        .scaled(inv4r2);
    ExprMatrix K2 =
        (B.transpose() *
         (Omega2 - Cblk + A * Omega1 - (Omega1 * Omega1).scaled(Expr::literal(2.0))) * CB)
            .scaled(inv4r2);

    ExprMatrix CS(7, 4);
    place(CS, 0, 0, CB);
    place(CS, 3, 0, neg(Omega1 * CB));
    place(CS, 3, 2, CB);
    place(CS, 6, 0, K1);
    place(CS, 6, 2, K2);

    Matrix g0(4, 7);
    g0 << 0, -1, 0, 0, 0, 0, 0,
          0, 1, 1, 0, 0, 0, 0,
          0, 0, 0, 0, -1, 0, 0,
         -1, 0, 0, 0, 1, 1, 0;

    fx.Omega = std::move(Omega);
    fx.G1 = std::move(G1);
    fx.Q1 = std::move(Q1);
    fx.Pi1 = std::move(Pi1);
    fx.G2 = std::move(G2);
    fx.Pi2 = std::move(Pi2);
    fx.Pi2_wrong = std::move(Pi2w);
    fx.C_Ncan = std::move(CN);
    fx.C_Scan = std::move(CS);
    fx.H = std::move(H);
    fx.G0_displayed = std::move(g0);
    return fx;
}

Fixture gm86_example() {
    Fixture fx;
    fx.name = "gm86";
    Expr t = Expr::time();
    CoefficientPair pair;
    pair.m = 2;
    pair.t0 = 0.0;
    pair.t1 = 1.0;
    pair.E = ExprMatrix(2, 2);
    pair.E.at(0, 0) = -t;
    pair.E.at(0, 1) = t.pow(2);
    pair.E.at(1, 0) = Expr::literal(-1.0);
    pair.E.at(1, 1) = t;
    pair.F = ExprMatrix::identity(2);
    fx.pair = std::move(pair);
    fx.expect_regular = false;
    fx.not_preregular_level = 1;
    fx.r = 1;
    fx.theta = {1};
    return fx;
}

Fixture plant_regular(int m, const std::vector<int>& theta_profile, std::uint64_t seed,
                      bool time_varying) {
    const int mu = static_cast<int>(theta_profile.size());
    for (std::size_t i = 1; i < theta_profile.size(); ++i)
        if (theta_profile[i] > theta_profile[i - 1])
            throw InvalidProfileError("theta profile must be nonincreasing");
    if (mu >= 1 && theta_profile.back() != 0)
        throw InvalidProfileError("theta profile must end in 0");
    if (mu >= 2 && theta_profile[static_cast<std::size_t>(mu) - 2] <= 0)
        throw InvalidProfileError("theta_{mu-2} must be positive");
    for (int v : theta_profile)
        if (v < 0) throw InvalidProfileError("negative theta");

    // Jordan block counts: theta_i blocks of order >= i+2.
    std::vector<int> order_count(static_cast<std::size_t>(mu) + 1, 0);  // index = order
    int n2 = 0;
    for (int k = 2; k <= mu; ++k) {
        int geq_k = theta_profile[static_cast<std::size_t>(k) - 2];
        int geq_k1 = k - 1 < mu ? theta_profile[static_cast<std::size_t>(k) - 1] : 0;
        order_count[static_cast<std::size_t>(k)] = geq_k - geq_k1;
        n2 += k * order_count[static_cast<std::size_t>(k)];
    }
    const int min_j1 = mu == 1 ? 1 : 0;
    const int slack = m - n2 - min_j1;
    if (slack < 0) throw InvalidProfileError("profile does not fit into m");

    SplitMix64 rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
    const int j1 = min_j1 + (slack > 0 ? rng.uniform_int(0, slack) : 0);
    const int d = m - n2 - j1;
    const int nil = m - d;

    Matrix w(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) w(i, j) = rng.uniform(-0.6, 0.6);

    Matrix nb = Matrix::Zero(nil, nil);
    int pos = 0;
    for (int k = mu; k >= 2; --k)
        for (int b = 0; b < order_count[static_cast<std::size_t>(k)]; ++b) {
            for (int i = 0; i + 1 < k; ++i) nb(pos + i, pos + i + 1) = 1.0;
            pos += k;
        }
    pos += j1;  // trailing 1x1 zero blocks

    Matrix e0 = Matrix::Zero(m, m);
    e0.topLeftCorner(d, d) = Matrix::Identity(d, d);
    e0.bottomRightCorner(nil, nil) = nb;
    Matrix f0 = Matrix::Zero(m, m);
    f0.topLeftCorner(d, d) = w;
    f0.bottomRightCorner(nil, nil) = Matrix::Identity(nil, nil);

    Matrix lt = random_well_conditioned(m, rng);
    Matrix kt = random_well_conditioned(m, rng);
    Matrix e_const = lt * e0 * kt;
    Matrix f_const = lt * f0 * kt;

    Fixture fx;
    fx.name = "plant-m" + std::to_string(m) + "-mu" + std::to_string(mu) + "-seed" +
              std::to_string(seed);
    fx.pair.m = m;
    fx.pair.t0 = 0.0;
    fx.pair.t1 = 1.0;
    fx.pair.E = ExprMatrix::from_matrix(e_const);
    fx.pair.F = ExprMatrix::from_matrix(f_const);

    Matrix proj = Matrix::Zero(m, m);
    proj.topLeftCorner(d, d) = Matrix::Identity(d, d);
    Matrix kt_inv = kt.fullPivLu().inverse();
    fx.Pi_can_planted = kt_inv * proj * kt;

    fx.mu = mu;
    fx.d = d;
    // rank E = d + sum (k-1) * count_k.
    int r = d;
    for (int k = 2; k <= mu; ++k) r += (k - 1) * order_count[static_cast<std::size_t>(k)];
    fx.r = r;
    fx.theta = theta_profile;
    fx.r_list.clear();
    int rj = r;
    for (int j = 0; j < mu; ++j) {
        fx.r_list.push_back(rj);
        rj -= theta_profile[static_cast<std::size_t>(j)];
    }
    if (mu == 0) {
        fx.d = m;
        fx.r = m;
    }
    Characteristics ch = derive_characteristics(m, fx.mu, fx.d, fx.r_list, fx.theta);
    fx.tractability = ch.tractability;

    if (time_varying) {
        const double amp = 1.0 / (12.0 * m);
        Expr t = Expr::time();
        auto small_poly = [&](SplitMix64& r2) {
            return Expr::literal(amp * r2.uniform(-1.0, 1.0)) +
                   Expr::literal(amp * r2.uniform(-1.0, 1.0)) * t +
                   Expr::literal(amp * r2.uniform(-1.0, 1.0)) * t.pow(2);
        };
        ExprMatrix lx = ExprMatrix::identity(m);
        ExprMatrix kx = ExprMatrix::identity(m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                lx.at(i, j) = lx.at(i, j) + small_poly(rng);
                kx.at(i, j) = kx.at(i, j) + small_poly(rng);
            }
        CoefficientPair tv = apply_equivalence(fx.pair, lx, kx);
        fx.pair = std::move(tv);
        fx.K_transform = std::move(kx);
    }
    return fx;
}

Fixture semiexplicit_example(int m, int r, std::uint64_t seed) {
    if (r <= 0 || r >= m) throw Error("semiexplicit_example: need 0 < r < m");
    const int s = m - r;
    SplitMix64 rng(seed * 0x9e3779b97f4a7c15ull + 17);
    Expr t = Expr::time();

    auto trig = [&](double scale) {
        return Expr::literal(scale * rng.uniform(-1.0, 1.0)) +
               Expr::literal(scale * rng.uniform(-1.0, 1.0)) * sin(t) +
               Expr::literal(scale * rng.uniform(-1.0, 1.0)) * cos(t);
    };

    CoefficientPair pair;
    pair.m = m;
    pair.t0 = 0.0;
    pair.t1 = 1.0;
    pair.E = ExprMatrix(m, m);
    for (int i = 0; i < r; ++i) pair.E.at(i, i) = Expr::literal(1.0);
    pair.F = ExprMatrix(m, m);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < m; ++j) pair.F.at(i, j) = trig(0.4);
    for (int i = r; i < m; ++i)
        for (int j = 0; j < r; ++j) pair.F.at(i, j) = trig(0.4);
    // Diagonally dominant F22 keeps the pair index one on the whole line.
    const double off = 0.5 / (3.0 * std::max(1, s));
    for (int i = r; i < m; ++i)
        for (int j = r; j < m; ++j) {
            if (i == j)
                pair.F.at(i, j) = Expr::literal(1.5 + 0.3 * rng.uniform(0.0, 1.0)) +
                                  Expr::literal(0.25 * rng.uniform(-1.0, 1.0)) * sin(t);
            else
                pair.F.at(i, j) = trig(off);
        }

    Fixture fx;
    fx.name = "semiexplicit-m" + std::to_string(m) + "-r" + std::to_string(r);
    fx.pair = std::move(pair);
    fx.mu = 1;
    fx.d = r;
    fx.r = r;
    fx.theta = {0};
    fx.r_list = {r};
    fx.tractability = {r, m};
    return fx;
}

}  // namespace dae
