#include "contractlab/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "contractlab/numerics.hpp"

namespace contractlab {

double extract_eta(std::span<const double> prev_slice, int y_index, const ModelParams& p,
                   const Grid& grid) {
    if (y_index < 0 || y_index > grid.I) throw std::out_of_range("extract_eta: bad node index");
    if (y_index == 0) return 0.0;
    const double y = grid.ys[y_index];
    const double onek = 1.0 + p.k;

    // scan from eta = 0 upward; strict improvement keeps the smallest maximizer
    double best_eta = 0.0;
    double best = prev_slice[y_index];
    for (int j = y_index - 1; j >= 0; --j) {
        const double eta = y - grid.ys[j];
        const double v = prev_slice[j] - onek * std::pow(eta, p.gamma);
        if (v > best) {
            best = v;
            best_eta = eta;
        }
    }
    const UniformCubicSpline value(prev_slice, grid.h);
    const double lo = std::max(0.0, best_eta - grid.h);
    const double hi = std::min(y, best_eta + grid.h);
    auto obj = [&](double eta) { return value(y - eta) - onek * std::pow(eta, p.gamma); };
    const auto [eta_ref, v_ref] = golden_max(obj, lo, hi, 1e-12 * std::max(1.0, y));
    return v_ref > best ? eta_ref : best_eta;
}

std::vector<unsigned char> intervention_region(const ValueSurface& Vn,
                                               const std::vector<double>& MVprev,
                                               const std::vector<double>& eta_raw, double tol) {
    std::vector<unsigned char> region(Vn.data.size(), 0);
    const double half_h = 0.5 * Vn.grid.h;
    for (std::size_t idx = 0; idx < Vn.data.size(); ++idx) {
        const bool touching = std::abs(Vn.data[idx] - MVprev[idx]) <= tol * (1.0 + std::abs(Vn.data[idx]));
        region[idx] = static_cast<unsigned char>(touching && eta_raw[idx] > half_h);
    }
    return region;
}

BonusScheme make_bonus_scheme(const ValueSurface& Vn, const ValueSurface& Vprev, double tol) {
    const Grid& grid = Vn.grid;
    const int M = grid.M, I = grid.I;
    BonusScheme s;
    s.level = Vn.level;
    s.M = M;
    s.I = I;
    s.eta_raw.assign(Vn.data.size(), 0.0);
    std::vector<double> MVprev(Vn.data.size(), 0.0);
    for (int m = 0; m <= M; ++m) {
        const auto prev_row = Vprev.row(m);
        const std::vector<double> mv = intervention_M(prev_row, Vn.params, grid);
        for (int i = 0; i <= I; ++i) {
            MVprev[s.idx(m, i)] = mv[i];
            s.eta_raw[s.idx(m, i)] = extract_eta(prev_row, i, Vn.params, grid);
        }
    }
    s.region = intervention_region(Vn, MVprev, s.eta_raw, tol);
    s.eta.assign(Vn.data.size(), 0.0);
    for (std::size_t idx = 0; idx < s.eta.size(); ++idx)
        if (s.region[idx]) s.eta[idx] = s.eta_raw[idx];
    return s;
}

DiagnosticsReport diagnostics(const std::vector<SolvedLevel>& levels,
                              const std::vector<BonusScheme>& schemes, const ModelParams& p) {
    DiagnosticsReport rep;
    if (levels.empty()) return rep;
    const Grid& grid = levels.front().surface.grid;
    const int M = grid.M, I = grid.I;

    for (const auto& lvl : levels) {
        rep.dominance_violations += lvl.dominance_violations;
        for (double v : lvl.surface.data) rep.max_abs_value = std::max(rep.max_abs_value, std::abs(v));
    }

    for (const auto& lvl : levels) {
        for (int m = 0; m <= M; ++m) {
            const auto row = lvl.surface.row(m);
            for (int i = 1; i < I; ++i) {
                const double second = row[i + 1] - 2.0 * row[i] + row[i - 1];
                rep.max_concavity_violation = std::max(rep.max_concavity_violation, second);
            }
        }
    }

    for (std::size_t n = 1; n < levels.size(); ++n) {
        const auto& vn = levels[n].surface;
        const auto& vprev = levels[n - 1].surface;
        for (int m = 0; m <= M; ++m) {
            const std::vector<double> mv = intervention_M(vprev.row(m), p, grid);
            for (int i = 0; i <= I; ++i) {
                rep.max_obstacle_residual =
                    std::max(rep.max_obstacle_residual, mv[i] - vn.at(m, i));
                if (vn.at(m, i) < vprev.at(m, i) - 1e-8) ++rep.monotonicity_violations;
            }
        }
    }

    for (const auto& s : schemes) {
        long flips = 0;
        bool hello = false;
        double min_y = -1.0;
        for (int m = 0; m <= M; ++m) {
            for (int i = 0; i < I; ++i) {
                if (s.in_region(m, i) && s.in_region(m, i + 1) &&
                    s.eta[s.idx(m, i + 1)] < s.eta[s.idx(m, i)] - 1e-9)
                    ++flips;
            }
            for (int i = 0; i <= I; ++i)
                if (s.eta_raw[s.idx(m, i)] >= grid.ys[i] && grid.ys[i] > 0.0)
                    ++rep.no_firing_violations;
        }
        for (int i = 0; i <= I; ++i) {
            if (s.in_region(0, i)) {
                hello = true;
                min_y = grid.ys[i];
                break;
            }
        }
        rep.eta_monotonicity_flips.push_back(flips);
        rep.golden_hello.push_back(hello);
        rep.min_region_y_t0.push_back(min_y);
    }
    return rep;
}

std::string DiagnosticsReport::to_text() const {
    std::ostringstream os;
    os << "max_concavity_violation=" << max_concavity_violation << "\n"
       << "max_abs_value=" << max_abs_value << "\n"
       << "max_obstacle_residual=" << max_obstacle_residual << "\n"
       << "monotonicity_violations=" << monotonicity_violations << "\n"
       << "no_firing_violations=" << no_firing_violations << "\n"
       << "dominance_violations=" << dominance_violations << "\n";
    for (std::size_t j = 0; j < golden_hello.size(); ++j) {
        os << "level_" << (j + 1) << ": eta_flips=" << eta_monotonicity_flips[j]
           << " golden_hello=" << (golden_hello[j] ? "yes" : "no")
           << " min_region_y_t0=" << min_region_y_t0[j] << "\n";
    }
    return os.str();
}

}  // namespace contractlab
