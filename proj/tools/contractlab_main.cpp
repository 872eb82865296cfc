#include <CLI11.hpp>

#include "contractlab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"contractlab: sequential-bonus contracting solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    double eps = -1.0;
    long long seed = -1;

    auto add_mode = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--eps", eps, "penalization parameter (overrides config)");
        sub->add_option("--seed", seed, "random seed (overrides config)");
        return sub;
    };
    add_mode("firstbest", "first-best value bounds over (delta, R) sweeps");
    add_mode("solve", "recursive value surfaces, bonus schemes and regions");
    add_mode("scheduled", "fixed payment schedule vs discretionary comparison");
    add_mode("simulate", "Monte Carlo replay of the extracted feedback policy");
    add_mode("diagnostics", "structure report over the solved surfaces");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    contractlab::CliOverrides ov;
    ov.mode = app.get_subcommands().front()->get_name();
    if (!out_dir.empty()) ov.out_dir = out_dir;
    if (eps >= 0.0) ov.eps = eps;
    if (seed >= 0) ov.seed = static_cast<std::uint64_t>(seed);
    return contractlab::run(config_path, ov);
}
