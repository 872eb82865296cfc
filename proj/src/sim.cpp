#include "contractlab/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace contractlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// explicit Box-Muller so the draw sequence is pinned by this code alone
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : eng_(seed) {}
    double next() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586;
        const double ang = two_pi * u2;
        spare_ = mag * std::sin(ang);
        have_ = true;
        return mag * std::cos(ang);
    }

private:
    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 eng_;
    bool have_ = false;
    double spare_ = 0.0;
};

struct CellWeights {
    int m0, i0;
    double wt, wy;
    int m_near, i_near;
};

CellWeights locate(const Grid& grid, double t, double y) {
    CellWeights c{};
    const double tp = std::clamp(t / grid.dt, 0.0, static_cast<double>(grid.M));
    c.m0 = std::min(static_cast<int>(tp), grid.M - 1);
    c.wt = tp - c.m0;
    const double yp = std::clamp(y / grid.h, 0.0, static_cast<double>(grid.I));
    c.i0 = std::min(static_cast<int>(yp), grid.I - 1);
    c.wy = yp - c.i0;
    c.m_near = c.wt < 0.5 ? c.m0 : c.m0 + 1;
    c.i_near = c.wy < 0.5 ? c.i0 : c.i0 + 1;
    return c;
}

template <class Fields>
double bilinear(const Fields& f, const CellWeights& c) {
    return (1.0 - c.wt) * ((1.0 - c.wy) * f(c.m0, c.i0) + c.wy * f(c.m0, c.i0 + 1)) +
           c.wt * ((1.0 - c.wy) * f(c.m0 + 1, c.i0) + c.wy * f(c.m0 + 1, c.i0 + 1));
}

struct PathOutcome {
    double payoff = 0.0;
    int bonuses = 0;
    int truncations = 0;
    double bonus_t[8];
    double bonus_eta[8];
};

}  // namespace

PolicyDecision policy_lookup(const std::vector<SolvedLevel>& levels,
                             const std::vector<BonusScheme>& schemes, int level, double t, double y) {
    const Grid& grid = levels.at(level).surface.grid;
    PolicyDecision out;
    if (y > grid.y_max) {
        out.truncated = true;
        y = grid.y_max;
    }
    y = std::max(y, 0.0);
    const CellWeights c = locate(grid, t, y);
    const PolicyField& pol = levels[level].policy;
    out.z = bilinear([&](int m, int i) { return pol.z(m, i); }, c);
    out.a = best_response(out.z, levels[level].surface.params);
    if (level > 0) {
        const BonusScheme& s = schemes.at(level);
        out.eta = bilinear([&](int m, int i) { return s.eta_raw[s.idx(m, i)]; }, c);
        out.pay_now = s.in_region(c.m_near, c.i_near);
    }
    return out;
}

void Histogram::add(double x) {
    if (counts.empty()) return;
    const double w = (hi - lo) / counts.size();
    int b = static_cast<int>((x - lo) / w);
    b = std::clamp(b, 0, static_cast<int>(counts.size()) - 1);
    ++counts[b];
}

SimResult simulate_value(const std::vector<SolvedLevel>& levels,
                         const std::vector<BonusScheme>& schemes, double y0, const SimConfig& cfg,
                         const ModelParams& p, const Grid& grid) {
    if (!(y0 >= 0.0 && y0 <= grid.y_max)) throw std::domain_error("simulate_value: y0 outside [0, y_max]");
    if (cfg.n_paths < 1) throw std::domain_error("simulate_value: n_paths must be >= 1");
    const double dt = cfg.dt_sim > 0.0 ? cfg.dt_sim : grid.dt;
    if (!(dt > 0.0 && dt <= p.T)) throw std::domain_error("simulate_value: dt_sim outside (0, T]");
    const int N = static_cast<int>(levels.size()) - 1;

    auto run_path = [&](std::int64_t path) {
        PathOutcome out{};
        NormalSource rng(splitmix64(cfg.seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(path) + 1ull));
        double Y = y0;
        int lvl = N;
        bool absorbed = (Y <= 0.0);
        double t = 0.0;
        while (t < p.T - 1e-12 && !absorbed) {
            const double step = std::min(dt, p.T - t);
            while (lvl > 0) {
                const PolicyDecision pd = policy_lookup(levels, schemes, lvl, t, Y);
                if (pd.truncated) ++out.truncations;
                if (!pd.pay_now || pd.eta <= 0.0) break;
                const double eta_pay = std::min(pd.eta, (1.0 - 1e-12) * Y);
                out.payoff -= std::exp(-p.rho * t) * (1.0 + p.k) * std::pow(eta_pay, p.gamma);
                if (out.bonuses < 8) {
                    out.bonus_t[out.bonuses] = t;
                    out.bonus_eta[out.bonuses] = eta_pay;
                }
                ++out.bonuses;
                Y -= eta_pay;
                --lvl;
            }
            const PolicyDecision pd = policy_lookup(levels, schemes, lvl, t, Y);
            if (pd.truncated) ++out.truncations;
            // exact discounting of the effort flow with a frozen control
            out.payoff += pd.a * (std::exp(-p.rho * t) - std::exp(-p.rho * (t + step)));
            Y += p.r * (Y + cost(pd.a, p)) * step +
                 p.r * pd.z * p.sigma * std::sqrt(step) * rng.next();
            if (Y <= 0.0) {
                Y = 0.0;
                absorbed = true;
            }
            t += step;
        }
        if (!absorbed) out.payoff -= std::exp(-p.rho * p.T) * std::pow(Y, p.gamma);
        return out;
    };

    std::vector<PathOutcome> outcomes(cfg.n_paths);
    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("CONTRACTLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) workers = static_cast<unsigned>(v);
    }
    workers = std::max(1u, std::min<unsigned>(workers, 64));
    if (workers > 1 && cfg.n_paths > 256) {
        std::atomic<std::int64_t> next{0};
        auto worker = [&]() {
            constexpr std::int64_t chunk = 256;
            for (;;) {
                const std::int64_t begin = next.fetch_add(chunk);
                if (begin >= cfg.n_paths) return;
                const std::int64_t end = std::min(begin + chunk, cfg.n_paths);
                for (std::int64_t pth = begin; pth < end; ++pth) outcomes[pth] = run_path(pth);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    } else {
        for (std::int64_t pth = 0; pth < cfg.n_paths; ++pth) outcomes[pth] = run_path(pth);
    }

    SimResult res;
    res.n_paths = cfg.n_paths;
    res.bonus_times.lo = 0.0;
    res.bonus_times.hi = p.T;
    res.bonus_times.counts.assign(20, 0);
    res.bonus_sizes.lo = 0.0;
    res.bonus_sizes.hi = grid.y_max;
    res.bonus_sizes.counts.assign(20, 0);

    // reduce in path order so the result is independent of the worker count
    double sum = 0.0;
    for (const auto& o : outcomes) {
        sum += o.payoff;
        res.total_bonuses += o.bonuses;
        res.truncation_events += o.truncations;
        for (int b = 0; b < std::min(o.bonuses, 8); ++b) {
            res.bonus_times.add(o.bonus_t[b]);
            res.bonus_sizes.add(o.bonus_eta[b]);
        }
    }
    res.estimate = sum / static_cast<double>(cfg.n_paths);
    double ss = 0.0;
    for (const auto& o : outcomes) {
        const double dev = o.payoff - res.estimate;
        ss += dev * dev;
    }
    if (cfg.n_paths > 1)
        res.std_error = std::sqrt(ss / (static_cast<double>(cfg.n_paths) - 1.0) /
                                  static_cast<double>(cfg.n_paths));
    return res;
}

}  // namespace contractlab
