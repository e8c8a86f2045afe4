#include "entac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json_detail.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace entac {

namespace {

using Clock = std::chrono::steady_clock;

[[noreturn]] void config_error(const std::string& path, const std::string& message) {
    throw std::invalid_argument("config key '" + path + "': " + message);
}

void reject_unknown_keys(const json& doc, const std::set<std::string>& allowed,
                         const std::string& prefix) {
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("unknown config key '" + prefix + it.key() + "'");
}

std::size_t get_size(const json& doc, const std::string& key, std::size_t min_value) {
    const json& j = doc.at(key);
    if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min_value)) {
        std::ostringstream os;
        os << "expected integer >= " << min_value << ", got " << j.dump();
        config_error(key, os.str());
    }
    return j.get<std::size_t>();
}

double get_positive(const json& doc, const std::string& key) {
    const json& j = doc.at(key);
    if (!j.is_number() || !(j.get<double>() > 0.0))
        config_error(key, "expected a positive number, got " + j.dump());
    return j.get<double>();
}

void require(const json& doc, const std::string& key) {
    if (!doc.contains(key)) config_error(key, "missing required key");
}

// ENTAC_<KEY> environment variables override top-level config keys. Values
// are parsed as JSON when possible, otherwise taken as strings.
void apply_env_overrides(json& doc) {
    static const char* keys[] = {"eta_a",      "eta_c",      "H",
                                 "K",          "lambda",     "tau_mode",
                                 "tau",        "critic_mode", "seed",
                                 "eval_every", "q_init",     "deterministic_gradient",
                                 "env",        "H_list",     "eta_a_grid",
                                 "eta_c_grid", "n_seeds",    "include_exact_oracle",
                                 "out_dir"};
    for (const char* key : keys) {
        std::string var = "ENTAC_";
        for (const char* c = key; *c; ++c)
            var += static_cast<char>(std::toupper(static_cast<unsigned char>(*c)));
        const char* value = std::getenv(var.c_str());
        if (!value) continue;
        json parsed = json::parse(value, nullptr, false);
        doc[key] = parsed.is_discarded() ? json(std::string(value)) : parsed;
    }
}

EnvSpec parse_env_spec(const json& j) {
    reject_unknown_keys(j, {"type", "rows", "cols", "n_states", "n_actions", "gamma", "init",
                            "seed"},
                        "env.");
    require(j, "type");
    require(j, "gamma");
    EnvSpec env;
    const std::string type = j.at("type").get<std::string>();
    env.gamma = j.at("gamma").get<double>();
    if (!(env.gamma > 0.0 && env.gamma < 1.0))
        config_error("env.gamma", "expected a number in (0,1), got " + j.at("gamma").dump());
    if (type == "gridworld") {
        env.type = EnvSpec::Type::Gridworld;
        require(j, "rows");
        require(j, "cols");
        env.rows = get_size(j, "rows", 1);
        env.cols = get_size(j, "cols", 1);
        if (j.contains("init")) {
            const std::string init = j.at("init").get<std::string>();
            if (init == "start-cell")
                env.init = GridInit::StartCell;
            else if (init == "uniform")
                env.init = GridInit::Uniform;
            else
                config_error("env.init", "expected \"start-cell\" or \"uniform\"");
        }
    } else if (type == "synthetic") {
        env.type = EnvSpec::Type::Synthetic;
        require(j, "n_states");
        require(j, "n_actions");
        env.n_states = get_size(j, "n_states", 1);
        env.n_actions = get_size(j, "n_actions", 1);
        if (j.contains("seed")) env.env_seed = get_size(j, "seed", 0);
    } else {
        config_error("env.type", "expected \"gridworld\" or \"synthetic\"");
    }
    return env;
}

Matrix parse_q_init(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "zeros")
            config_error("q_init", "expected \"zeros\" or a 2-D array");
        return Matrix();
    }
    if (!j.is_array() || j.empty() || !j.front().is_array())
        config_error("q_init", "expected \"zeros\" or a 2-D array");
    const std::size_t rows = j.size(), cols = j.front().size();
    Matrix q(rows, cols);
    for (std::size_t s = 0; s < rows; ++s) {
        if (j[s].size() != cols) config_error("q_init", "ragged rows");
        for (std::size_t a = 0; a < cols; ++a) q(s, a) = j[s][a].get<double>();
    }
    return q;
}

TrainConfig parse_train(const json& doc) {
    reject_unknown_keys(doc, {"eta_a", "eta_c", "H", "K", "lambda", "tau_mode", "tau",
                              "critic_mode", "seed", "eval_every", "q_init", "env",
                              "deterministic_gradient"},
                        "");
    for (const char* key : {"eta_a", "eta_c", "H", "K", "lambda", "seed"}) require(doc, key);

    TrainConfig cfg;
    cfg.eta_a = get_positive(doc, "eta_a");
    cfg.eta_c = get_positive(doc, "eta_c");
    cfg.critic_steps = get_size(doc, "H", 1);
    cfg.iterations = get_size(doc, "K", 0);
    cfg.lambda = get_positive(doc, "lambda");
    cfg.seed = get_size(doc, "seed", 0);
    if (doc.contains("eval_every")) cfg.eval_every = get_size(doc, "eval_every", 1);
    if (doc.contains("tau_mode")) {
        const std::string mode = doc.at("tau_mode").get<std::string>();
        if (mode == "auto-tau-lambda")
            cfg.tau_mode = TauMode::AutoTauLambda;
        else if (mode == "fixed")
            cfg.tau_mode = TauMode::Fixed;
        else if (mode == "disabled")
            cfg.tau_mode = TauMode::Disabled;
        else
            config_error("tau_mode", "expected auto-tau-lambda, fixed, or disabled");
    }
    if (cfg.tau_mode == TauMode::Fixed) {
        require(doc, "tau");
        cfg.fixed_tau = get_positive(doc, "tau");
    } else if (doc.contains("tau")) {
        config_error("tau", "only valid with tau_mode \"fixed\"");
    }
    if (doc.contains("critic_mode")) {
        const std::string mode = doc.at("critic_mode").get<std::string>();
        if (mode == "learned")
            cfg.critic_mode = CriticMode::Learned;
        else if (mode == "exact-oracle")
            cfg.critic_mode = CriticMode::ExactOracle;
        else
            config_error("critic_mode", "expected learned or exact-oracle");
    }
    if (doc.contains("q_init")) cfg.q_init = parse_q_init(doc.at("q_init"));
    if (doc.contains("deterministic_gradient"))
        cfg.deterministic_gradient = doc.at("deterministic_gradient").get<bool>();
    return cfg;
}

SweepSpec parse_sweep(const json& doc) {
    reject_unknown_keys(doc, {"env", "lambda", "H_list", "eta_a_grid", "eta_c_grid", "n_seeds",
                              "K", "eval_every", "include_exact_oracle", "out_dir"},
                        "");
    for (const char* key :
         {"env", "lambda", "H_list", "eta_a_grid", "eta_c_grid", "n_seeds", "K", "out_dir"})
        require(doc, key);

    SweepSpec spec;
    spec.env = parse_env_spec(doc.at("env"));
    spec.lambda = get_positive(doc, "lambda");
    for (const auto& h : doc.at("H_list")) {
        if (!h.is_number_integer() || h.get<long long>() < 1)
            config_error("H_list", "entries must be integers >= 1");
        spec.critic_steps_list.push_back(h.get<std::size_t>());
    }
    spec.eta_a_grid = doc.at("eta_a_grid").get<std::vector<double>>();
    spec.eta_c_grid = doc.at("eta_c_grid").get<std::vector<double>>();
    spec.n_seeds = get_size(doc, "n_seeds", 1);
    spec.iterations = get_size(doc, "K", 0);
    if (doc.contains("eval_every")) spec.eval_every = get_size(doc, "eval_every", 1);
    if (doc.contains("include_exact_oracle"))
        spec.include_exact_oracle = doc.at("include_exact_oracle").get<bool>();
    spec.out_dir = doc.at("out_dir").get<std::string>();
    if (spec.critic_steps_list.empty() || spec.eta_a_grid.empty() || spec.eta_c_grid.empty())
        throw std::invalid_argument("sweep config: grids and H_list must be nonempty");
    for (double e : spec.eta_a_grid)
        if (!(e > 0.0)) config_error("eta_a_grid", "entries must be positive");
    for (double e : spec.eta_c_grid)
        if (!(e > 0.0)) config_error("eta_c_grid", "entries must be positive");
    return spec;
}

json env_spec_json(const EnvSpec& env) {
    json j;
    j["gamma"] = env.gamma;
    if (env.type == EnvSpec::Type::Gridworld) {
        j["type"] = "gridworld";
        j["rows"] = env.rows;
        j["cols"] = env.cols;
        j["init"] = env.init == GridInit::StartCell ? "start-cell" : "uniform";
    } else {
        j["type"] = "synthetic";
        j["n_states"] = env.n_states;
        j["n_actions"] = env.n_actions;
        j["seed"] = env.env_seed;
    }
    return j;
}

struct SweepJob {
    std::size_t critic_steps = 0;  // 0 = exact oracle
    double eta_a = 0.0;
    double eta_c = 0.0;
    std::uint64_t seed = 0;
};

TrainConfig job_config(const SweepSpec& spec, const SweepJob& job) {
    TrainConfig cfg;
    cfg.eta_a = job.eta_a;
    cfg.eta_c = job.eta_c;
    cfg.critic_steps = job.critic_steps == 0 ? 1 : job.critic_steps;
    cfg.critic_mode = job.critic_steps == 0 ? CriticMode::ExactOracle : CriticMode::Learned;
    cfg.iterations = spec.iterations;
    cfg.lambda = spec.lambda;
    cfg.seed = job.seed;
    cfg.eval_every = spec.eval_every;
    return cfg;
}

// Runs jobs over a small pool; results are stored by job index so every
// schedule produces identical output.
std::vector<RunTrace> run_jobs(const TabularMdp& mdp, const SweepSpec& spec,
                               const std::vector<SweepJob>& jobs, std::size_t threads,
                               std::vector<std::string>& failures) {
    std::vector<RunTrace> traces(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                traces[i] = run_ent_ac(mdp, job_config(spec, jobs[i]));
                if (traces[i].aborted) errors[i] = traces[i].abort_reason;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    threads = std::max<std::size_t>(1, threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < jobs.size(); ++i)
        if (!errors[i].empty()) {
            std::ostringstream os;
            os << "(H=" << jobs[i].critic_steps << ",eta_a=" << jobs[i].eta_a
               << ",eta_c=" << jobs[i].eta_c << ",seed=" << jobs[i].seed << "): " << errors[i];
            failures.push_back(os.str());
            traces[i].records.clear();
        }
    return traces;
}

double final_objective(const RunTrace& trace) {
    return trace.records.empty() ? -std::numeric_limits<double>::infinity()
                                 : trace.records.back().objective;
}

std::pair<double, double> mean_std(const std::vector<double>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    KahanSum sum;
    for (double x : xs) sum.add(x);
    const double mean = sum.value() / static_cast<double>(xs.size());
    if (xs.size() == 1) return {mean, 0.0};
    KahanSum sq;
    for (double x : xs) sq.add((x - mean) * (x - mean));
    return {mean, std::sqrt(sq.value() / static_cast<double>(xs.size() - 1))};
}

std::string run_csv_name(std::size_t critic_steps, std::size_t seed_index) {
    std::ostringstream os;
    if (critic_steps == 0)
        os << "oracle_seed" << seed_index << ".csv";
    else
        os << "H" << critic_steps << "_seed" << seed_index << ".csv";
    return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct CsvRun {
    std::vector<std::size_t> ks;
    std::vector<double> objectives;
};

CsvRun parse_run_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "k,objective,subopt,grad_norm,critic_mse,policy_min")
        throw std::runtime_error("unexpected CSV header");
    CsvRun run;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        run.ks.push_back(static_cast<std::size_t>(std::stoull(field)));
        std::getline(row, field, ',');
        run.objectives.push_back(std::stod(field));
    }
    return run;
}

}  // namespace

ParsedConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
    apply_env_overrides(doc);

    ParsedConfig out;
    if (doc.contains("H_list")) {
        out.value = parse_sweep(doc);
    } else {
        if (doc.contains("env")) out.env = parse_env_spec(doc.at("env"));
        json train = doc;
        train.erase("env");
        out.value = parse_train(train);
    }
    return out;
}

TabularMdp make_env(const EnvSpec& env) {
    if (env.type == EnvSpec::Type::Gridworld)
        return make_gridworld(env.rows, env.cols, env.gamma, env.init);
    return make_synthetic(env.n_states, env.n_actions, env.gamma, env.env_seed);
}

SweepSummary run_sweep(const SweepSpec& spec, std::uint64_t base_seed, std::size_t threads) {
    const auto start = Clock::now();
    if (spec.out_dir.empty()) throw std::invalid_argument("run_sweep: out_dir is empty");
    fs::create_directories(fs::path(spec.out_dir) / "runs");

    TabularMdp mdp = make_env(spec.env);
    SweepSummary summary;
    {
        SoftSolution opt = optimal_reg_values(mdp, spec.lambda);
        summary.j_star = opt.j_star;
    }
    summary.constants = constants_report(mdp, spec.lambda, tau_lambda(mdp, spec.lambda),
                                         spec.eta_a_grid.front(), spec.eta_c_grid.front(),
                                         Matrix());

    std::vector<std::size_t> arms = spec.critic_steps_list;
    if (spec.include_exact_oracle) arms.push_back(0);  // 0 denotes the oracle

    const std::size_t pilot_seeds = std::min<std::size_t>(5, spec.n_seeds);

    // Phase 1: grid search per arm on the pilot seeds.
    std::vector<SweepJob> pilot_jobs;
    for (std::size_t h : arms) {
        const std::size_t n_ec = h == 0 ? 1 : spec.eta_c_grid.size();
        for (double ea : spec.eta_a_grid)
            for (std::size_t ci = 0; ci < n_ec; ++ci)
                for (std::size_t i = 0; i < pilot_seeds; ++i)
                    pilot_jobs.push_back(SweepJob{h, ea, spec.eta_c_grid[ci], base_seed + i});
    }
    std::vector<RunTrace> pilot_traces = run_jobs(mdp, spec, pilot_jobs, threads,
                                                  summary.failures);

    struct Winner {
        double eta_a = 0.0, eta_c = 0.0;
        double mean = -std::numeric_limits<double>::infinity();
    };
    std::vector<Winner> winners(arms.size());
    std::size_t cursor = 0;
    for (std::size_t ai = 0; ai < arms.size(); ++ai) {
        const std::size_t h = arms[ai];
        const std::size_t n_ec = h == 0 ? 1 : spec.eta_c_grid.size();
        for (double ea : spec.eta_a_grid)
            for (std::size_t ci = 0; ci < n_ec; ++ci) {
                std::vector<double> finals;
                for (std::size_t i = 0; i < pilot_seeds; ++i) {
                    const RunTrace& t = pilot_traces[cursor++];
                    if (!t.records.empty()) finals.push_back(final_objective(t));
                }
                const double mean = finals.empty()
                                        ? -std::numeric_limits<double>::infinity()
                                        : mean_std(finals).first;
                if (mean > winners[ai].mean) {
                    winners[ai] = Winner{ea, spec.eta_c_grid[ci], mean};
                }
            }
    }

    // Phase 2: full runs at each arm's winner, seed i -> base_seed + i.
    std::vector<SweepJob> full_jobs;
    for (std::size_t ai = 0; ai < arms.size(); ++ai)
        for (std::size_t i = 0; i < spec.n_seeds; ++i)
            full_jobs.push_back(
                SweepJob{arms[ai], winners[ai].eta_a, winners[ai].eta_c, base_seed + i});
    std::vector<RunTrace> traces = run_jobs(mdp, spec, full_jobs, threads, summary.failures);

    // Per-run CSVs and the aggregate, written in deterministic order.
    std::ostringstream agg;
    agg << "H,k,mean_objective,std_objective,n\n";
    for (std::size_t ai = 0; ai < arms.size(); ++ai) {
        std::vector<const RunTrace*> ok;
        double wall = 0.0;
        for (std::size_t i = 0; i < spec.n_seeds; ++i) {
            const RunTrace& t = traces[ai * spec.n_seeds + i];
            wall += t.runtime_seconds;
            if (t.records.empty()) continue;
            write_file(fs::path(spec.out_dir) / "runs" / run_csv_name(arms[ai], i),
                       trace_to_csv(t));
            ok.push_back(&t);
        }

        if (!ok.empty()) {
            const std::size_t n_records = ok.front()->records.size();
            for (std::size_t r = 0; r < n_records; ++r) {
                std::vector<double> objectives;
                for (const RunTrace* t : ok) objectives.push_back(t->records[r].objective);
                auto [mean, sd] = mean_std(objectives);
                agg << arms[ai] << ',' << ok.front()->records[r].k << ',' << format_double(mean)
                    << ',' << format_double(sd) << ',' << objectives.size() << '\n';
            }
        }

        SweepArmSummary arm;
        arm.critic_steps = arms[ai];
        arm.eta_a = winners[ai].eta_a;
        arm.eta_c = winners[ai].eta_c;
        arm.n_runs = ok.size();
        std::vector<double> finals;
        for (const RunTrace* t : ok) finals.push_back(final_objective(*t));
        std::tie(arm.final_mean, arm.final_std) = mean_std(finals);
        arm.wall_seconds = wall;
        summary.arms.push_back(arm);
    }
    write_file(fs::path(spec.out_dir) / "aggregate.csv", agg.str());

    summary.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    write_file(fs::path(spec.out_dir) / "sweep.json",
               sweep_summary_json(spec, summary, base_seed));

    // Wall-clock data is the one output that cannot be reproduced bit for
    // bit, so it lives in its own file.
    json timings;
    timings["total_seconds"] = summary.wall_seconds;
    for (const auto& arm : summary.arms) {
        json a;
        a["H"] = arm.critic_steps;
        a["seconds"] = arm.wall_seconds;
        timings["arms"].push_back(a);
    }
    write_file(fs::path(spec.out_dir) / "timings.json", timings.dump(2));
    return summary;
}

std::string sweep_summary_json(const SweepSpec& spec, const SweepSummary& summary,
                               std::uint64_t base_seed) {
    json j;
    j["spec"]["env"] = env_spec_json(spec.env);
    j["spec"]["lambda"] = spec.lambda;
    j["spec"]["H_list"] = spec.critic_steps_list;
    j["spec"]["eta_a_grid"] = spec.eta_a_grid;
    j["spec"]["eta_c_grid"] = spec.eta_c_grid;
    j["spec"]["n_seeds"] = spec.n_seeds;
    j["spec"]["K"] = spec.iterations;
    j["spec"]["eval_every"] = spec.eval_every;
    j["spec"]["include_exact_oracle"] = spec.include_exact_oracle;
    j["base_seed"] = base_seed;
    j["J_star"] = summary.j_star;
    j["constants"] = detail::constants_json(summary.constants);
    for (const auto& arm : summary.arms) {
        json a;
        a["H"] = arm.critic_steps;
        a["eta_a"] = arm.eta_a;
        a["eta_c"] = arm.eta_c;
        a["final_mean"] = arm.final_mean;
        a["final_std"] = arm.final_std;
        a["n"] = arm.n_runs;
        j["arms"].push_back(a);
    }
    j["failures"] = summary.failures;
    return j.dump(2);
}

std::string summarize(const std::string& out_dir) {
    const fs::path dir(out_dir);
    const fs::path runs = dir / "runs";
    if (!fs::exists(runs) || fs::is_empty(runs))
        throw std::runtime_error("no runs found in " + out_dir);

    json meta;
    std::vector<std::string> errors;
    try {
        meta = json::parse(read_file(dir / "sweep.json"));
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("cannot load sweep.json: ") + e.what());
    }

    // Final aggregate row per arm, keyed by H, for the recomputation check.
    struct AggRow {
        double mean = 0.0, sd = 0.0;
        bool present = false;
    };
    std::map<std::size_t, AggRow> final_rows;
    try {
        std::istringstream agg(read_file(dir / "aggregate.csv"));
        std::string line;
        std::getline(agg, line);
        if (line != "H,k,mean_objective,std_objective,n")
            throw std::runtime_error("unexpected aggregate header");
        while (std::getline(agg, line)) {
            if (line.empty()) continue;
            std::istringstream row(line);
            std::string field;
            std::getline(row, field, ',');
            const std::size_t h = static_cast<std::size_t>(std::stoull(field));
            std::getline(row, field, ',');  // k, rows are ordered so the last wins
            std::getline(row, field, ',');
            final_rows[h].mean = std::stod(field);
            std::getline(row, field, ',');
            final_rows[h].sd = std::stod(field);
            final_rows[h].present = true;
        }
    } catch (const std::exception& e) {
        errors.push_back((dir / "aggregate.csv").string() + ": " + e.what());
    }

    // Recompute the per-arm statistics from the raw per-run CSVs.
    json out;
    out["J_star"] = meta.value("J_star", 0.0);
    out["constants"] = meta.contains("constants") ? meta["constants"] : json();
    out["failures"] = meta.contains("failures") ? meta["failures"] : json::array();

    const std::size_t n_seeds = meta["spec"].value("n_seeds", std::size_t(0));
    for (const auto& arm : meta["arms"]) {
        const std::size_t h = arm.at("H").get<std::size_t>();
        std::vector<double> finals;
        for (std::size_t i = 0; i < n_seeds; ++i) {
            const fs::path path = runs / run_csv_name(h, i);
            if (!fs::exists(path)) continue;  // failed run, excluded by the sweep
            try {
                CsvRun run = parse_run_csv(read_file(path));
                if (run.objectives.empty()) throw std::runtime_error("no data rows");
                finals.push_back(run.objectives.back());
            } catch (const std::exception& e) {
                errors.push_back(path.string() + ": " + e.what());
            }
        }
        auto [mean, sd] = mean_std(finals);
        json a;
        a["H"] = h;
        a["eta_a"] = arm.at("eta_a");
        a["eta_c"] = arm.at("eta_c");
        a["final_mean"] = mean;
        a["final_std"] = sd;
        a["n"] = finals.size();
        const double written_mean = arm.at("final_mean").get<double>();
        a["consistent_with_sweep_json"] =
            std::abs(mean - written_mean) <= 1e-12 * std::max(1.0, std::abs(written_mean));
        const AggRow& row = final_rows[h];
        a["consistent_with_aggregate"] =
            row.present &&
            std::abs(mean - row.mean) <= 1e-12 * std::max(1.0, std::abs(row.mean)) &&
            std::abs(sd - row.sd) <= 1e-12 * std::max(1.0, std::abs(row.sd));
        out["arms"].push_back(a);
    }

    if (fs::exists(dir / "timings.json")) {
        try {
            out["wall_times"] = json::parse(read_file(dir / "timings.json"));
        } catch (const std::exception& e) {
            errors.push_back((dir / "timings.json").string() + ": " + e.what());
        }
    }
    out["errors"] = errors;
    return out.dump(2);
}

}  // namespace entac
