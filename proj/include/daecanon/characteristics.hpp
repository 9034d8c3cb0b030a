#pragma once

#include "daecanon/reduction.hpp"

namespace dae {

struct StrangenessRow {
    int r = 0;  // strangeness rank r^S_i
    int a = 0;
    int s = 0;
    int d = 0;
    int u = 0;
    bool operator==(const StrangenessRow&) const = default;
};

/// All characteristic tables derived from the reduction data (m, mu, r_j,
/// theta_j): the strangeness recurrence, and the tractability/dissection
/// rank lists. Pure arithmetic; the reduction characteristics determine
/// every other concept's values.
struct Characteristics {
    int m = 0;
    int mu = 0;
    int d = 0;
    std::vector<int> r_list;      // r_0..r_{mu-1} (empty for index zero)
    std::vector<int> theta_list;  // theta_0..theta_{mu-1}
    int mu_S = 0;
    std::vector<StrangenessRow> strangeness;  // rows i = 0..mu-1 (one row for mu = 0)
    std::vector<int> tractability;            // r^T_0..r^T_mu
    std::vector<int> dissection;              // r^D_0..r^D_mu (equal values)
};

Characteristics derive_characteristics(int m, int mu, int d, std::vector<int> r_list,
                                       std::vector<int> theta_list);

/// Errors with NotRegularError when the chain verdict is not Regular.
Characteristics derive_characteristics(const ReductionChain& chain);

/// Direct pointwise strangeness ranks (r, a, s, d, u) from orthonormal
/// bases of ker E, (ker E)^perp, (im E)^perp and (im Z^T F T)^perp — the
/// independent oracle against the closed-form mapping.
StrangenessRow strangeness_values_pointwise(const Matrix& E, const Matrix& F,
                                            double tol = kRankTol, double anchor = 0.0);

}  // namespace dae
