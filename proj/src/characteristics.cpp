#include "daecanon/characteristics.hpp"

namespace dae {

Characteristics derive_characteristics(int m, int mu, int d, std::vector<int> r_list,
                                       std::vector<int> theta_list) {
    Characteristics ch;
    ch.m = m;
    ch.mu = mu;
    ch.d = d;
    ch.r_list = std::move(r_list);
    ch.theta_list = std::move(theta_list);

    if (mu == 0) {
        // Regular implicit ODE: all tables are trivial.
        ch.mu_S = 0;
        ch.strangeness.push_back({m, 0, 0, m, 0});
        ch.tractability = {m};
        ch.dissection = {m};
        return ch;
    }

    ch.mu_S = mu - 1;
    int rs = ch.r_list.at(0);
    for (int i = 0; i < mu; ++i) {
        int theta = ch.theta_list.at(static_cast<std::size_t>(i));
        StrangenessRow row;
        row.r = rs;
        row.s = theta;
        row.d = rs - theta;
        row.a = m - rs - theta;
        row.u = 0;
        ch.strangeness.push_back(row);
        rs = row.d;  // r^S_{i+1} = d_i
    }

    ch.tractability.push_back(ch.r_list.at(0));
    for (int i = 1; i <= mu; ++i)
        ch.tractability.push_back(m - ch.theta_list.at(static_cast<std::size_t>(i - 1)));
    ch.dissection = ch.tractability;
    return ch;
}

Characteristics derive_characteristics(const ReductionChain& chain) {
    if (!chain.regular())
        throw NotRegularError("derive_characteristics: chain verdict is " +
                              to_string(chain.verdict));
    return derive_characteristics(chain.m, chain.mu, chain.d, chain.r_list(),
                                  chain.theta_list());
}

StrangenessRow strangeness_values_pointwise(const Matrix& E, const Matrix& F, double tol,
                                            double anchor) {
    const int m = static_cast<int>(E.rows());
    StrangenessRow row;
    row.r = rank_of(E, tol, anchor);
    SubspaceBasis T = onb_nullspace(E, tol, anchor);
    SubspaceBasis Tc = onb_range(E.transpose(), tol, anchor);  // (ker E)^perp
    SubspaceBasis Z = onb_corange(E, tol, anchor);
    Matrix zft = Z.columns.transpose() * F * T.columns;
    row.a = rank_of(zft, tol, anchor);
    SubspaceBasis V = onb_corange(zft, tol, anchor);
    Matrix vzftc = V.columns.transpose() * Z.columns.transpose() * F * Tc.columns;
    row.s = rank_of(vzftc, tol, anchor);
    row.d = row.r - row.s;
    row.u = m - row.r - row.a - row.s;
    return row;
}

}  // namespace dae
