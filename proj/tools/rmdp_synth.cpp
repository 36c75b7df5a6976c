// rmdp_synth: finite-model PASR checks and the Dubins abstraction pipeline.
//
// Exit codes: 0 success, 1 property refuted, 2 input error, 3 soundness gate failed.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rmdp/abstraction.hpp"
#include "rmdp/config.hpp"
#include "rmdp/imdp.hpp"
#include "rmdp/imdp_io.hpp"
#include "rmdp/model_io.hpp"
#include "rmdp/parallel.hpp"
#include "rmdp/pasr.hpp"
#include "rmdp/refine_sim.hpp"

namespace fs = std::filesystem;
using namespace rmdp;

namespace {

enum Exit : int { kOk = 0, kRefuted = 1, kInputError = 2, kGateFailed = 3 };

struct Common {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string format = "json";
    bool quiet = false;
    bool gzip = false;
};

class Log {
public:
    explicit Log(bool quiet) : quiet_(quiet) {}
    template <class T>
    Log& operator<<(const T& v) {
        if (!quiet_) std::cout << v;
        return *this;
    }

private:
    bool quiet_;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

fs::path out_dir(const Common& c) {
    fs::path p(c.out);
    fs::create_directories(p);
    return p;
}

PipelineConfig load(const Common& c) {
    if (c.config.empty()) throw ConfigError("--config is required");
    auto cfg = load_pipeline_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    return cfg;
}

std::string imdp_name(const Common& c) { return c.gzip ? "abstraction.imdp.gz" : "abstraction.imdp"; }

int cmd_check_pasr(const Common& c, const std::string& m1_path, const std::string& m2_path,
                   const std::string& rel_path) {
    Log log(c.quiet);
    const auto m1 = read_model(m1_path);
    const auto m2 = read_model(m2_path);
    const auto rel = read_relation(rel_path, m1, m2);
    const auto report = check_pasr(m1, m2, rel);
    const auto dir = out_dir(c);
    auto j = report_to_json(report, m1, m2);
    if (report.holds) j["interface"] = interface_to_json(compute_interface(m1, m2, rel), m1, m2);
    write_json_file(j, dir / "pasr_report.json");
    if (report.holds) {
        log << "PASR holds\n";
        return kOk;
    }
    log << "PASR fails: condition " << report.failed_condition << "\n";
    return kRefuted;
}

int cmd_abstract(const Common& c) {
    Log log(c.quiet);
    const auto cfg = load(c);
    const DubinsSystem sys(cfg.system.params);
    const auto grid = make_grid(cfg.abstraction, sys);
    const auto actions = make_action_grid(cfg.abstraction, sys);
    AbstractionOptions opts;
    opts.pruning_sigmas = cfg.abstraction.pruning_sigmas;
    opts.threads = c.threads;
    const auto t0 = Clock::now();
    const auto abs = build_abstraction(sys, grid, actions, cfg.abstraction.geometry, cfg.system.params.parameter_box(),
                                       cfg.abstraction.initial_state, opts);
    const double build_s = seconds_since(t0);
    const auto dir = out_dir(c);
    export_explicit(abs.imdp, dir / imdp_name(c));
    write_json_file(abstraction_metadata(abs, sys, opts), dir / "abstraction_meta.json");
    log << "states " << abs.stats.states << "\ntransitions " << abs.stats.transitions << "\nbuild_seconds " << build_s
        << "\n";
    return kOk;
}

int cmd_solve(const Common& c, const std::string& imdp_path) {
    Log log(c.quiet);
    ReachAvoidSpec spec;
    if (!c.config.empty()) {
        spec = load(c).solve;
    } else {
        spec.goal = kGoalLabel;
        spec.unsafe = kUnsafeLabel;
    }
    const auto m = import_explicit(imdp_path);
    const auto problems = validate_imdp(m);
    if (!problems.ok()) throw ParseError(imdp_path + ": " + problems.problems.front());
    const auto t0 = Clock::now();
    const auto r = robust_value_iteration(m, spec, c.threads);
    const auto dir = out_dir(c);
    write_json_file(solve_result_to_json(r), dir / "solve.json");
    log << "rho_star " << r.rho_star << "\niterations " << r.iterations << "\nsolve_seconds " << seconds_since(t0)
        << "\n";
    return kOk;
}

void write_stats(const Common& c, const SimulationStats& s, const fs::path& dir) {
    if (c.format == "csv") {
        std::ofstream f(dir / "stats.csv");
        const auto j = stats_to_json(s);
        f << "runs,satisfied,frequency,ci_low,ci_high,rho_star,seed\n"
          << j["runs"].dump() << ',' << j["satisfied"].dump() << ',' << j["frequency"].dump() << ','
          << j["ci_low"].dump() << ',' << j["ci_high"].dump() << ',' << j["rho_star"].dump() << ','
          << j["seed"].dump() << '\n';
    } else {
        write_json_file(stats_to_json(s), dir / "stats.json");
    }
}

SimulationStats simulate(const Common& c, const PipelineConfig& cfg, const nlohmann::json& meta,
                         const SolveResult& solve, const fs::path& dir) {
    const DubinsSystem sys(cfg.system.params);
    const auto grid = grid_from_metadata(meta);
    const auto actions = actions_from_metadata(meta);
    const auto geometry = geometry_from_json(meta.at("geometry"));
    const auto ctrl = refine_abstract_policy(solve, grid, actions);
    const auto init = meta.at("initial_state").get<std::vector<double>>();
    SimulationOptions opts;
    opts.runs = cfg.simulation.runs;
    opts.horizon = cfg.simulation.horizon;
    opts.record_runs = cfg.simulation.record_runs;
    opts.seed = cfg.seed;
    opts.threads = c.threads;
    const auto stats = run_monte_carlo(sys, ctrl, geometry, cfg.system.true_params,
                                       Eigen::Map<const Eigen::VectorXd>(init.data(), static_cast<Eigen::Index>(init.size())),
                                       opts, solve.rho_star);
    write_stats(c, stats, dir);
    if (opts.record_runs > 0) write_trajectories(stats, sys.state_names(), sys.input_names(), dir / "trajectories.csv");
    return stats;
}

int cmd_simulate(const Common& c, const std::string& meta_path, const std::string& solve_path) {
    Log log(c.quiet);
    const auto cfg = load(c);
    const auto meta = read_json_file(meta_path);
    const auto solve = solve_result_from_json(read_json_file(solve_path));
    const auto stats = simulate(c, cfg, meta, solve, out_dir(c));
    log << "frequency " << stats.frequency << "\nci " << stats.ci_low << " " << stats.ci_high << "\n";
    return kOk;
}

int cmd_pipeline(const Common& c) {
    Log log(c.quiet);
    const auto dir = out_dir(c);
    Common quiet = c;
    quiet.quiet = true;
    if (const int rc = cmd_abstract(quiet); rc != kOk) return rc;
    const auto cfg = load(c);
    const fs::path imdp = dir / imdp_name(c);
    if (const int rc = cmd_solve(quiet, imdp.string()); rc != kOk) return rc;
    const auto meta = read_json_file(dir / "abstraction_meta.json");
    const auto solve = solve_result_from_json(read_json_file(dir / "solve.json"));
    const auto stats = simulate(c, cfg, meta, solve, dir);
    const double eps = hoeffding_epsilon(stats.runs);
    const bool gate = stats.frequency >= solve.rho_star - eps;
    log << "rho_star " << solve.rho_star << "\nfrequency " << stats.frequency << "\nhoeffding_epsilon " << eps
        << "\ngate " << (gate ? "pass" : "FAIL") << "\n";
    return gate ? kOk : kGateFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust policy synthesis via probabilistic alternating simulation"};
    app.require_subcommand(1);
    Common common;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "pipeline config JSON");
        sub->add_option("--out", common.out, "output directory");
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--threads", threads, "worker threads (default: RMDP_SYNTH_THREADS or all cores)");
        sub->add_option("--format", common.format, "stats output format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_flag("--quiet", common.quiet, "suppress progress output");
    };

    std::string m1, m2, rel, imdp_path, meta_path, solve_path;
    auto* check = app.add_subcommand("check-pasr", "check a PASR between two finite robust MDPs");
    check->add_option("model1", m1, "refining model M1 (JSON)")->required();
    check->add_option("model2", m2, "abstract model M2 (JSON)")->required();
    check->add_option("relation", rel, "relation R (JSON pairs)")->required();
    add_common(check);

    auto* abstract = app.add_subcommand("abstract", "build the interval MDP abstraction");
    abstract->add_flag("--gzip", common.gzip, "gzip the explicit IMDP");
    add_common(abstract);

    auto* solve = app.add_subcommand("solve", "robust value iteration on an explicit IMDP");
    solve->add_option("imdp", imdp_path, "explicit IMDP file")->required();
    add_common(solve);

    auto* sim = app.add_subcommand("simulate", "refine the policy and run Monte Carlo validation");
    sim->add_option("--meta", meta_path, "abstraction metadata JSON")->required();
    sim->add_option("--solve", solve_path, "solve result JSON")->required();
    add_common(sim);

    auto* pipe = app.add_subcommand("pipeline", "abstract, solve, refine and simulate");
    pipe->add_flag("--gzip", common.gzip, "gzip the explicit IMDP");
    add_common(pipe);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }
    common.seed = seed;
    if (threads) common.threads = *threads;
    if (common.threads > 0) set_default_threads(common.threads);

    try {
        if (*check) return cmd_check_pasr(common, m1, m2, rel);
        if (*abstract) return cmd_abstract(common);
        if (*solve) return cmd_solve(common, imdp_path);
        if (*sim) return cmd_simulate(common, meta_path, solve_path);
        if (*pipe) return cmd_pipeline(common);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
