#pragma once

#include <string>
#include <vector>

#include "daecanon/linalg.hpp"

namespace dae {

/// A solution sampled on a uniform time grid, with the DAE residual
/// ||E x' + F x - q|| (x' by 4th-order differences) recorded per node.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<double> residual;
    int d = 0;  // dynamical degree of freedom of the underlying flow

    int points() const { return static_cast<int>(times.size()); }

    /// CSV with header t,x1,...,xm,residual.
    std::string to_csv() const;

    /// State at the grid node nearest to t.
    const Vector& state_at(double t) const;
};

}  // namespace dae
