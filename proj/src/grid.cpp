#include "contractlab/grid.hpp"

#include <stdexcept>

namespace contractlab {

Grid make_grid(double y_max, int I, int M, double T) {
    if (y_max <= 0.0 || I < 2 || M < 1 || T <= 0.0)
        throw std::invalid_argument("make_grid: need y_max > 0, I >= 2, M >= 1, T > 0");
    Grid g;
    g.y_max = y_max;
    g.I = I;
    g.h = y_max / I;
    g.M = M;
    g.dt = T / M;
    g.T = T;
    g.ys.resize(I + 1);
    g.ts.resize(M + 1);
    // i * y_max / I keeps the endpoints exact
    for (int i = 0; i <= I; ++i) g.ys[i] = static_cast<double>(i) * y_max / I;
    for (int m = 0; m <= M; ++m) g.ts[m] = static_cast<double>(m) * T / M;
    return g;
}

Stencil stencils(std::span<const double> values, int i, double h) {
    if (i < 1 || i + 1 >= static_cast<int>(values.size()))
        throw std::out_of_range("stencils: index must be interior");
    Stencil s;
    s.dplus = values[i + 1] - values[i];
    s.dminus = values[i] - values[i - 1];
    s.dy = (s.dplus + s.dminus) / (2.0 * h);
    s.dyy = (s.dplus - s.dminus) / (h * h);
    return s;
}

}  // namespace contractlab
