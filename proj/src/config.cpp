#include "contractlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace contractlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for '" + key + "': " + v);
    }
}

std::vector<double> parse_list(const std::string& key, std::string v) {
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream is(v);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(parse_double(key, tok));
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "grid" && section != "solver" &&
                section != "experiment" && section != "output")
                throw ConfigError("config line " + std::to_string(lineno) + ": unknown section [" +
                                  section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key outside a section");

        auto unknown = [&]() -> ConfigError {
            return ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                               "' in [" + section + "]");
        };
        if (section == "model") {
            if (key == "gamma") cfg.gamma = parse_double(key, val);
            else if (key == "rho") cfg.rho = parse_double(key, val);
            else if (key == "delta") cfg.delta = parse_double(key, val);
            else if (key == "r") cfg.r = parse_double(key, val);
            else if (key == "sigma") cfg.sigma = parse_double(key, val);
            else if (key == "k") cfg.k = parse_double(key, val);
            else if (key == "a_bar") cfg.a_bar = parse_double(key, val);
            else if (key == "T") cfg.T = parse_double(key, val);
            else if (key == "cost_c2") cfg.cost_c2 = parse_double(key, val);
            else if (key == "cost_c1") cfg.cost_c1 = parse_double(key, val);
            else throw unknown();
        } else if (section == "grid") {
            if (key == "y_max") cfg.y_max = parse_double(key, val);
            else if (key == "I") cfg.I = static_cast<int>(parse_int(key, val));
            else if (key == "M") cfg.M = static_cast<int>(parse_int(key, val));
            else throw unknown();
        } else if (section == "solver") {
            if (key == "eps") cfg.eps = parse_double(key, val);
            else if (key == "max_policy_iters") cfg.max_policy_iters = static_cast<int>(parse_int(key, val));
            else if (key == "policy_tol") cfg.policy_tol = parse_double(key, val);
            else throw unknown();
        } else if (section == "experiment") {
            if (key == "mode") cfg.mode = val;
            else if (key == "N") cfg.N = static_cast<int>(parse_int(key, val));
            else if (key == "schedule_times") cfg.schedule_times = parse_list(key, val);
            else if (key == "delta_sweep") cfg.delta_sweep = parse_list(key, val);
            else if (key == "R_sweep") cfg.R_sweep = parse_list(key, val);
            else if (key == "zeta") cfg.zeta = parse_double(key, val);
            else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, val));
            else if (key == "n_paths") cfg.n_paths = parse_int(key, val);
            else if (key == "y0") cfg.y0 = parse_double(key, val);
            else if (key == "dt_sim") cfg.dt_sim = parse_double(key, val);
            else throw unknown();
        } else {  // output
            if (key == "dir") cfg.out_dir = val;
            else throw unknown();
        }
    }
    return cfg;
}

void validate_config(const RunConfig& cfg, const std::string& mode) {
    if (mode != "firstbest" && mode != "solve" && mode != "scheduled" && mode != "simulate" &&
        mode != "diagnostics")
        throw ConfigError("config: unknown mode '" + mode + "'");
    if (!cfg.mode.empty() && cfg.mode != mode)
        throw ConfigError("config: mode '" + cfg.mode + "' does not match requested '" + mode + "'");
    if (!(cfg.gamma > 2.0)) throw ConfigError("config: gamma must exceed 2");
    if (!(cfg.eps > 0.0)) throw ConfigError("config: eps must be positive");
    if (cfg.N < 0) throw ConfigError("config: N must be nonnegative");
    if (cfg.delta.has_value() == cfg.r.has_value())
        throw ConfigError("config: specify exactly one of model.delta / model.r");
    if (!(cfg.rho > 0.0)) throw ConfigError("config: rho must be positive");
    if (!(cfg.y_max > 0.0) || cfg.I < 2 || cfg.M < 1)
        throw ConfigError("config: grid requires y_max > 0, I >= 2, M >= 1");
    if (cfg.max_policy_iters < 1) throw ConfigError("config: max_policy_iters must be >= 1");
    if (!(cfg.policy_tol > 0.0)) throw ConfigError("config: policy_tol must be positive");
    for (double dv : cfg.delta_sweep)
        if (!(dv > 0.0)) throw ConfigError("config: delta_sweep entries must be positive");

    if (mode == "scheduled") {
        if (cfg.schedule_times.empty())
            throw ConfigError("config: scheduled mode needs schedule_times");
        for (std::size_t s = 0; s < cfg.schedule_times.size(); ++s) {
            if (!(cfg.schedule_times[s] > 0.0 && cfg.schedule_times[s] < cfg.T))
                throw ConfigError("config: schedule times must lie in (0, T)");
            if (s > 0 && cfg.schedule_times[s] <= cfg.schedule_times[s - 1])
                throw ConfigError("config: schedule times must be strictly increasing");
        }
    }
    if (mode == "simulate") {
        if (cfg.n_paths < 1) throw ConfigError("config: n_paths must be >= 1");
        if (!(cfg.y0 >= 0.0 && cfg.y0 <= cfg.y_max))
            throw ConfigError("config: y0 must lie in [0, y_max]");
        if (cfg.dt_sim < 0.0 || cfg.dt_sim > cfg.T)
            throw ConfigError("config: dt_sim must lie in (0, T] (or 0 for the grid step)");
    }
    if (mode == "firstbest" && cfg.zeta.has_value() && cfg.N > 0) {
        if (!(cfg.zeta.value() > 0.0 && cfg.zeta.value() < cfg.T / cfg.N))
            throw ConfigError("config: zeta must lie in (0, T/N)");
    }
    // construction re-checks positivity of the remaining primitives
    resolve_model(cfg);
}

ModelParams resolve_model(const RunConfig& cfg) {
    const double r = cfg.r.has_value() ? cfg.r.value() : cfg.delta.value() * cfg.rho;
    try {
        return ModelParams::make(cfg.gamma, r, cfg.rho, cfg.sigma, cfg.k, cfg.a_bar, cfg.T,
                                 cfg.cost_c2, cfg.cost_c1);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ModelParams resolve_model_with_delta(const RunConfig& cfg, double delta_ratio) {
    try {
        return ModelParams::make(cfg.gamma, delta_ratio * cfg.rho, cfg.rho, cfg.sigma, cfg.k,
                                 cfg.a_bar, cfg.T, cfg.cost_c2, cfg.cost_c1);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::string config_to_text(const RunConfig& cfg, const std::string& mode) {
    std::ostringstream os;
    os << "[model]\n"
       << "gamma = " << cfg.gamma << "\nrho = " << cfg.rho << "\n";
    if (cfg.delta) os << "delta = " << *cfg.delta << "\n";
    if (cfg.r) os << "r = " << *cfg.r << "\n";
    os << "sigma = " << cfg.sigma << "\nk = " << cfg.k << "\na_bar = " << cfg.a_bar
       << "\nT = " << cfg.T << "\ncost_c2 = " << cfg.cost_c2 << "\ncost_c1 = " << cfg.cost_c1
       << "\n\n[grid]\ny_max = " << cfg.y_max << "\nI = " << cfg.I << "\nM = " << cfg.M
       << "\n\n[solver]\neps = " << cfg.eps << "\nmax_policy_iters = " << cfg.max_policy_iters
       << "\npolicy_tol = " << cfg.policy_tol << "\n\n[experiment]\nmode = " << mode
       << "\nN = " << cfg.N << "\nseed = " << cfg.seed << "\nn_paths = " << cfg.n_paths
       << "\ny0 = " << cfg.y0 << "\ndt_sim = " << cfg.dt_sim << "\n";
    auto list = [&os](const char* key, const std::vector<double>& v) {
        os << key << " =";
        for (double x : v) os << " " << x;
        os << "\n";
    };
    list("schedule_times", cfg.schedule_times);
    list("delta_sweep", cfg.delta_sweep);
    list("R_sweep", cfg.R_sweep);
    if (cfg.zeta) os << "zeta = " << *cfg.zeta << "\n";
    os << "\n[output]\ndir = " << cfg.out_dir << "\n";
    return os.str();
}

}  // namespace contractlab
