#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "entac/mdp.hpp"
#include "entac/trainer.hpp"

namespace entac {

/// Environment description used by configs; resolved to a TabularMdp by
/// make_env.
struct EnvSpec {
    enum class Type { Gridworld, Synthetic };
    Type type = Type::Gridworld;
    std::size_t rows = 2, cols = 2;          // gridworld
    std::size_t n_states = 4, n_actions = 4; // synthetic
    double gamma = 0.99;
    GridInit init = GridInit::StartCell;
    std::uint64_t env_seed = 0;              // synthetic
};

struct SweepSpec {
    EnvSpec env;
    double lambda = 0.05;
    std::vector<std::size_t> critic_steps_list;  // "H_list"
    std::vector<double> eta_a_grid;
    std::vector<double> eta_c_grid;
    std::size_t n_seeds = 1;
    std::size_t iterations = 5000;  // "K"
    std::size_t eval_every = 10;
    bool include_exact_oracle = false;
    std::string out_dir;
};

struct ParsedConfig {
    std::optional<EnvSpec> env;  // for train configs; sweeps carry it in spec
    std::variant<TrainConfig, SweepSpec> value;

    bool is_sweep() const { return std::holds_alternative<SweepSpec>(value); }
};

/// Strict JSON parsing: unknown keys are rejected with their path, missing
/// required keys are named, defaults are filled (theta0 zeros, q_init
/// zeros, eval_every 10). A document with an "H_list" key is a sweep.
/// Environment variables with prefix ENTAC_ override any top-level key.
ParsedConfig parse_config(const std::string& json_text);

TabularMdp make_env(const EnvSpec& env);

struct SweepArmSummary {
    std::size_t critic_steps = 0;  // 0 denotes the exact-critic oracle
    double eta_a = 0.0;
    double eta_c = 0.0;
    double final_mean = 0.0;
    double final_std = 0.0;
    std::size_t n_runs = 0;
    double wall_seconds = 0.0;
};

struct SweepSummary {
    double j_star = 0.0;
    ConstantsReport constants;
    std::vector<SweepArmSummary> arms;
    std::vector<std::string> failures;  // "(H=..,seed=..): reason"
    double wall_seconds = 0.0;
};

/// For each H: grid search (eta_a, eta_c) on pilot seeds by mean final
/// objective, then n_seeds full runs at the winner. Writes per-run CSVs,
/// aggregate.csv (H,k,mean_objective,std_objective,n) and sweep.json under
/// spec.out_dir. Seed i of every arm maps to base_seed + i, so results are
/// independent of scheduling.
SweepSummary run_sweep(const SweepSpec& spec, std::uint64_t base_seed, std::size_t threads = 1);

/// Recomputes per-arm statistics from the raw per-run CSVs in out_dir,
/// cross-checks them against aggregate.csv, and returns a JSON document.
/// Missing or corrupt files are reported per path.
std::string summarize(const std::string& out_dir);

std::string sweep_summary_json(const SweepSpec& spec, const SweepSummary& summary,
                               std::uint64_t base_seed);

}  // namespace entac
