#pragma once

#include <span>
#include <vector>

namespace contractlab {

/// Uniform (t, y) discretization. ys[I] and ts[M] close the intervals exactly.
struct Grid {
    double y_max = 0.0;
    int I = 0;       ///< spatial interval count: nodes 0..I
    double h = 0.0;  ///< y_max / I
    int M = 0;       ///< time steps: nodes 0..M
    double dt = 0.0; ///< T / M
    double T = 0.0;
    std::vector<double> ys;
    std::vector<double> ts;
};

Grid make_grid(double y_max, int I, int M, double T);

/// Raw one-step differences and the derivative quotients assembled from them.
struct Stencil {
    double dplus = 0.0;   ///< v[i+1] - v[i]
    double dminus = 0.0;  ///< v[i] - v[i-1]
    double dy = 0.0;      ///< (v[i+1] - v[i-1]) / (2h)
    double dyy = 0.0;     ///< (v[i+1] - 2 v[i] + v[i-1]) / h^2
};

/// Stencil at interior index i (1 <= i <= size-2); throws std::out_of_range otherwise.
Stencil stencils(std::span<const double> values, int i, double h);

}  // namespace contractlab
