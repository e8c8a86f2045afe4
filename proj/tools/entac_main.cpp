#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "entac/exact.hpp"
#include "entac/harness.hpp"
#include "entac/mdp.hpp"
#include "entac/trainer.hpp"
#include "entac/verify.hpp"
#include "json.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

entac::TabularMdp resolve_mdp(const std::string& mdp_path,
                              const std::optional<entac::EnvSpec>& env) {
    if (!mdp_path.empty()) return entac::mdp_from_json(read_file(mdp_path));
    if (env) return entac::make_env(*env);
    throw std::runtime_error("no environment: pass --mdp or an \"env\" config key");
}

int cmd_solve(const std::string& config_path, const std::string& mdp_path, double lambda,
              double tol) {
    std::optional<entac::EnvSpec> env;
    if (!config_path.empty()) {
        entac::ParsedConfig parsed = entac::parse_config(read_file(config_path));
        if (parsed.is_sweep()) {
            const auto& spec = std::get<entac::SweepSpec>(parsed.value);
            env = spec.env;
            if (lambda <= 0.0) lambda = spec.lambda;
        } else {
            env = parsed.env;
            if (lambda <= 0.0) lambda = std::get<entac::TrainConfig>(parsed.value).lambda;
        }
    }
    if (lambda <= 0.0) throw std::runtime_error("solve: lambda must be positive");

    entac::TabularMdp mdp = resolve_mdp(mdp_path, env);
    entac::SoftSolution sol = entac::optimal_reg_values(mdp, lambda, tol);

    nlohmann::json out;
    out["J_star"] = sol.j_star;
    out["v_star"] = sol.v_star;
    out["pi_star"] = sol.pi_star.probs.storage();
    out["n_states"] = mdp.n_states;
    out["n_actions"] = mdp.n_actions;
    out["iterations"] = sol.iterations;
    out["residual"] = sol.residual;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_train(const std::string& config_path, const std::string& mdp_path,
              const std::string& out_path, long long seed_override) {
    entac::ParsedConfig parsed = entac::parse_config(read_file(config_path));
    if (parsed.is_sweep())
        throw std::runtime_error("train: config describes a sweep; use the sweep subcommand");
    entac::TrainConfig cfg = std::get<entac::TrainConfig>(parsed.value);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);

    entac::TabularMdp mdp = resolve_mdp(mdp_path, parsed.env);
    entac::RunTrace trace = entac::run_ent_ac(mdp, cfg);
    if (!out_path.empty()) write_file(out_path, entac::trace_to_csv(trace));
    std::cout << entac::trace_summary_json(trace) << "\n";
    return trace.aborted ? 1 : 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override,
              long long seed_override, std::size_t threads) {
    entac::ParsedConfig parsed = entac::parse_config(read_file(config_path));
    if (!parsed.is_sweep())
        throw std::runtime_error("sweep: config describes a single run; use train");
    entac::SweepSpec spec = std::get<entac::SweepSpec>(parsed.value);
    if (!out_override.empty()) spec.out_dir = out_override;
    const std::uint64_t base_seed = seed_override >= 0 ? seed_override : 0;

    entac::SweepSummary summary = entac::run_sweep(spec, base_seed, threads);
    std::cout << entac::sweep_summary_json(spec, summary, base_seed) << "\n";
    if (!summary.failures.empty()) {
        std::cerr << summary.failures.size() << " run(s) failed\n";
        return 1;
    }
    return 0;
}

int cmd_check(const std::string& suite, std::uint64_t seed) {
    bool all_passed = true;
    for (const entac::CheckResult& r : entac::run_check_suite(suite, seed)) {
        std::cout << entac::check_result_json(r) << "\n";
        all_passed = all_passed && r.passed;
    }
    return all_passed ? 0 : 1;
}

int cmd_summarize(const std::string& dir) {
    std::string doc = entac::summarize(dir);
    std::cout << doc << "\n";
    nlohmann::json parsed = nlohmann::json::parse(doc);
    return parsed["errors"].empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entac - tabular entropy-regularized actor-critic laboratory"};
    app.require_subcommand(1);

    std::string config_path, mdp_path, out_path, suite = "all", dir;
    double lambda = 0.0, tol = 1e-12;
    long long seed = -1;
    std::size_t threads = 1;

    CLI::App* solve = app.add_subcommand("solve", "soft value iteration for the optimal policy");
    solve->add_option("--config", config_path, "config JSON with an env block");
    solve->add_option("--mdp", mdp_path, "serialized MDP JSON");
    solve->add_option("--lambda", lambda, "temperature (overrides config)");
    solve->add_option("--tol", tol, "sup-norm tolerance, scaled by 1-gamma");

    CLI::App* train = app.add_subcommand("train", "one Ent-AC run");
    train->add_option("--config", config_path, "train config JSON")->required();
    train->add_option("--mdp", mdp_path, "serialized MDP JSON (overrides env)");
    train->add_option("--out", out_path, "write the trace CSV here");
    train->add_option("--seed", seed, "override the config seed");

    CLI::App* sweep = app.add_subcommand("sweep", "grid-searched multi-seed experiment");
    sweep->add_option("--config", config_path, "sweep config JSON")->required();
    sweep->add_option("--out", out_path, "override out_dir");
    sweep->add_option("--seed", seed, "base seed (default 0)");
    sweep->add_option("--threads", threads, "worker threads");

    CLI::App* check = app.add_subcommand("check", "numerical lemma checks");
    check->add_option("--suite", suite,
                      "gradients|variance|contraction|projection|aux|all");
    std::uint64_t check_seed = 0;
    check->add_option("--seed", check_seed, "suite seed");

    CLI::App* summ = app.add_subcommand("summarize", "aggregate a sweep directory");
    summ->add_option("dir", dir, "sweep output directory");
    summ->add_option("--out", out_path, "sweep output directory (alternative)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(config_path, mdp_path, lambda, tol);
        if (train->parsed()) return cmd_train(config_path, mdp_path, out_path, seed);
        if (sweep->parsed()) return cmd_sweep(config_path, out_path, seed, threads);
        if (check->parsed()) return cmd_check(suite, check_seed);
        if (summ->parsed()) {
            if (dir.empty()) dir = out_path;
            if (dir.empty()) throw std::runtime_error("summarize: no directory given");
            return cmd_summarize(dir);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
