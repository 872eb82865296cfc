#include "contractlab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "contractlab/csv.hpp"
#include "contractlab/firstbest.hpp"
#include "contractlab/scheme.hpp"
#include "contractlab/sim.hpp"

namespace contractlab {

namespace {

namespace fs = std::filesystem;

unsigned worker_cap() {
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CONTRACTLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) workers = static_cast<unsigned>(v);
    }
    return std::min(workers, 64u);
}

/// Runs fn(index) for 0..count-1 on the worker pool; rethrows the first error.
template <class Fn>
void parallel_entries(std::size_t count, Fn&& fn) {
    const unsigned workers = std::min<std::size_t>(worker_cap(), count);
    if (workers <= 1 || count <= 1) {
        for (std::size_t j = 0; j < count; ++j) fn(j);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mtx;
    auto body = [&]() {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= count) return;
            try {
                fn(j);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mtx);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

SolverOptions solver_options(const RunConfig& cfg) {
    SolverOptions opts;
    opts.max_policy_iters = cfg.max_policy_iters;
    opts.policy_tol = cfg.policy_tol;
    return opts;
}

std::string delta_dir_name(double delta_ratio) { return "delta_" + fmt12(delta_ratio); }

/// Sweep entries: (delta ratio, output dir). A single-model run keeps the
/// root output directory.
struct SweepEntry {
    ModelParams params;
    fs::path dir;
};

std::vector<SweepEntry> sweep_entries(const RunConfig& cfg, const fs::path& out_root) {
    std::vector<SweepEntry> entries;
    if (cfg.delta_sweep.empty()) {
        entries.push_back({resolve_model(cfg), out_root});
    } else {
        for (double dv : cfg.delta_sweep)
            entries.push_back({resolve_model_with_delta(cfg, dv), out_root / delta_dir_name(dv)});
    }
    return entries;
}

void write_levels(const std::vector<SolvedLevel>& levels, const std::vector<BonusScheme>& schemes,
                  const Grid& grid, const fs::path& dir) {
    for (std::size_t n = 0; n < levels.size(); ++n) {
        export_surface_csv(levels[n].surface, (dir / ("value_n" + std::to_string(n) + ".csv")).string());
        if (n >= 1) {
            const BonusScheme& s = schemes[n];
            export_surface_csv(grid.ts, grid.ys, s.eta,
                               (dir / ("scheme_n" + std::to_string(n) + ".csv")).string());
            export_mask_csv(grid.ts, grid.ys, s.region,
                            (dir / ("region_n" + std::to_string(n) + ".csv")).string());
        }
    }
}

std::vector<BonusScheme> build_schemes(const std::vector<SolvedLevel>& levels, double eps) {
    std::vector<BonusScheme> schemes(levels.size());
    for (std::size_t n = 1; n < levels.size(); ++n)
        schemes[n] = make_bonus_scheme(levels[n].surface, levels[n - 1].surface, eps);
    return schemes;
}

void mode_solve(const RunConfig& cfg, const fs::path& out_root) {
    const Grid grid = make_grid(cfg.y_max, cfg.I, cfg.M, cfg.T);
    const auto entries = sweep_entries(cfg, out_root);
    parallel_entries(entries.size(), [&](std::size_t j) {
        ensure_dir(entries[j].dir);
        const auto levels = solve_recursive(cfg.N, entries[j].params, grid, cfg.eps, solver_options(cfg));
        const auto schemes = build_schemes(levels, cfg.eps);
        write_levels(levels, schemes, grid, entries[j].dir);
    });
}

void mode_firstbest(const RunConfig& cfg, const fs::path& out_root) {
    std::vector<double> deltas = cfg.delta_sweep;
    if (deltas.empty()) deltas.push_back(resolve_model(cfg).delta);
    std::vector<double> Rs = cfg.R_sweep;
    if (Rs.empty()) Rs.push_back(0.0);

    std::vector<std::string> rows(deltas.size() * Rs.size());
    parallel_entries(deltas.size(), [&](std::size_t di) {
        const ModelParams p = resolve_model_with_delta(cfg, deltas[di]);
        const double zeta = cfg.zeta.value_or(cfg.N > 0 ? cfg.T / (2.0 * cfg.N) : 0.0);
        for (std::size_t ri = 0; ri < Rs.size(); ++ri) {
            const FirstBestBounds b = fb_bounds(Rs[ri], cfg.N, zeta, p);
            rows[di * Rs.size() + ri] = fmt12(deltas[di]) + "," + fmt12(Rs[ri]) + "," +
                                        fmt12(b.lower) + "," + fmt12(b.upper) + "," +
                                        fmt12(b.lambda_lower) + "," + fmt12(b.lambda_upper) + "," +
                                        to_string(b.regime);
        }
    });
    export_table_csv("delta,R,lower,upper,lambda_lower,lambda_upper,regime", rows,
                     (out_root / "firstbest.csv").string());
}

void mode_scheduled(const RunConfig& cfg, const fs::path& out_root) {
    const Grid grid = make_grid(cfg.y_max, cfg.I, cfg.M, cfg.T);
    const auto entries = sweep_entries(cfg, out_root);
    parallel_entries(entries.size(), [&](std::size_t j) {
        ensure_dir(entries[j].dir);
        const ModelParams& p = entries[j].params;
        const ValueSurface sched = solve_scheduled(cfg.schedule_times, p, grid, cfg.eps, solver_options(cfg));
        const auto levels = solve_recursive(1, p, grid, cfg.eps, solver_options(cfg));
        export_surface_csv(sched, (entries[j].dir / "scheduled.csv").string());
        export_surface_csv(levels[1].surface, (entries[j].dir / "discretionary_n1.csv").string());
        std::vector<std::string> rows;
        for (int i = 0; i <= grid.I; ++i)
            rows.push_back(fmt12(grid.ys[i]) + "," + fmt12(sched.at(0, i)) + "," +
                           fmt12(levels[1].surface.at(0, i)));
        export_table_csv("y,scheduled,discretionary", rows,
                         (entries[j].dir / "compare_t0.csv").string());
    });
}

void mode_simulate(const RunConfig& cfg, const fs::path& out_root) {
    const Grid grid = make_grid(cfg.y_max, cfg.I, cfg.M, cfg.T);
    const ModelParams p = resolve_model(cfg);
    const auto levels = solve_recursive(cfg.N, p, grid, cfg.eps, solver_options(cfg));
    const auto schemes = build_schemes(levels, cfg.eps);
    SimConfig sc;
    sc.n_paths = cfg.n_paths;
    sc.dt_sim = cfg.dt_sim;
    sc.seed = cfg.seed;
    sc.y0 = cfg.y0;
    const SimResult res = simulate_value(levels, schemes, cfg.y0, sc, p, grid);
    export_table_csv("estimate,std_error,n_paths,total_bonuses,truncation_events,pde_value_at_y0",
                     {fmt12(res.estimate) + "," + fmt12(res.std_error) + "," +
                      std::to_string(res.n_paths) + "," + std::to_string(res.total_bonuses) + "," +
                      std::to_string(res.truncation_events) + "," +
                      fmt12([&] {
                          const int i0 = static_cast<int>(std::lround(cfg.y0 / grid.h));
                          return levels.back().surface.at(0, std::clamp(i0, 0, grid.I));
                      }())},
                     (out_root / "sim.csv").string());
    auto hist_rows = [](const Histogram& h) {
        std::vector<std::string> rows;
        const double w = (h.hi - h.lo) / h.counts.size();
        for (std::size_t b = 0; b < h.counts.size(); ++b)
            rows.push_back(fmt12(h.lo + b * w) + "," + fmt12(h.lo + (b + 1) * w) + "," +
                           std::to_string(h.counts[b]));
        return rows;
    };
    export_table_csv("bin_lo,bin_hi,count", hist_rows(res.bonus_times),
                     (out_root / "bonus_times.csv").string());
    export_table_csv("bin_lo,bin_hi,count", hist_rows(res.bonus_sizes),
                     (out_root / "bonus_sizes.csv").string());
}

void mode_diagnostics(const RunConfig& cfg, const fs::path& out_root) {
    const Grid grid = make_grid(cfg.y_max, cfg.I, cfg.M, cfg.T);
    const auto entries = sweep_entries(cfg, out_root);
    parallel_entries(entries.size(), [&](std::size_t j) {
        ensure_dir(entries[j].dir);
        const auto levels = solve_recursive(cfg.N, entries[j].params, grid, cfg.eps, solver_options(cfg));
        const auto schemes = build_schemes(levels, cfg.eps);
        std::vector<BonusScheme> nonzero(schemes.begin() + std::min<std::size_t>(1, schemes.size()),
                                         schemes.end());
        const DiagnosticsReport rep = diagnostics(levels, nonzero, entries[j].params);
        std::vector<std::string> rows = {
            "max_concavity_violation," + fmt12(rep.max_concavity_violation),
            "max_abs_value," + fmt12(rep.max_abs_value),
            "max_obstacle_residual," + fmt12(rep.max_obstacle_residual),
            "monotonicity_violations," + std::to_string(rep.monotonicity_violations),
            "no_firing_violations," + std::to_string(rep.no_firing_violations),
            "dominance_violations," + std::to_string(rep.dominance_violations),
        };
        for (std::size_t lv = 0; lv < rep.golden_hello.size(); ++lv) {
            const std::string tag = "level" + std::to_string(lv + 1);
            rows.push_back(tag + "_eta_flips," + std::to_string(rep.eta_monotonicity_flips[lv]));
            rows.push_back(tag + "_golden_hello," + std::string(rep.golden_hello[lv] ? "1" : "0"));
            rows.push_back(tag + "_min_region_y_t0," + fmt12(rep.min_region_y_t0[lv]));
        }
        export_table_csv("key,value", rows, (entries[j].dir / "diagnostics.csv").string());
        write_levels(levels, schemes, grid, entries[j].dir);
    });
}

}  // namespace

int run(const std::string& config_path, const CliOverrides& overrides) {
    const auto t_start = std::chrono::steady_clock::now();
    RunConfig cfg;
    std::string mode;
    try {
        cfg = parse_config(config_path);
        if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
        if (overrides.eps) cfg.eps = *overrides.eps;
        if (overrides.seed) cfg.seed = *overrides.seed;
        mode = overrides.mode.empty() ? cfg.mode : overrides.mode;
        if (mode.empty()) throw ConfigError("config: no mode given (config or command line)");
        validate_config(cfg, mode);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const fs::path out_root(cfg.out_dir);
        ensure_dir(out_root);
        if (mode == "solve") mode_solve(cfg, out_root);
        else if (mode == "firstbest") mode_firstbest(cfg, out_root);
        else if (mode == "scheduled") mode_scheduled(cfg, out_root);
        else if (mode == "simulate") mode_simulate(cfg, out_root);
        else mode_diagnostics(cfg, out_root);

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        std::ofstream manifest(out_root / "run_manifest.txt");
        if (!manifest) throw IoError("cannot write run manifest");
        manifest << "contractlab_version = 0.1.0\n"
                 << "wall_time_s = " << wall << "\n\n"
                 << config_to_text(cfg, mode);
        manifest.flush();
        if (!manifest) throw IoError("run manifest write failed");
    } catch (const NonconvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace contractlab
