// Acceptance suite: one self-contained criterion per function, each printing
// a single pass/fail line with its measured margin and runtime.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "entac/harness.hpp"
#include "entac/sampling.hpp"
#include "entac/trainer.hpp"
#include "entac/verify.hpp"

using namespace entac;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

Logits random_logits(std::size_t s, std::size_t a, double range, Rng& rng) {
    Logits theta = Logits::zeros(s, a);
    for (std::size_t i = 0; i < theta.theta.size(); ++i)
        theta.theta.data()[i] = uniform_range(rng, -range, range);
    return theta;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, double range, Rng& rng) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = uniform_range(rng, -range, range);
    return m;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// 1. Gradient fidelity against central finite differences.
Outcome gradient_fidelity() {
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        TabularMdp mdp = make_synthetic(5, 3, 0.9, rng());
        Logits theta = random_logits(5, 3, 3.0, rng);
        Matrix exact = exact_gradient(mdp, theta, 0.1);
        Matrix fd = finite_diff_gradient(mdp, theta, 0.1, 1e-5);
        worst = std::max(worst, sup_norm(fd - exact) / std::max(sup_norm(exact), 1e-12));
    }
    return {worst <= 1e-5, "max relative error " + fmt(worst) + " (tol 1e-05)"};
}

// 2. Enumerated estimator mean equals the exact gradient.
Outcome unbiasedness() {
    Rng rng(102);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t S = 3 + uniform_index(rng, 4), A = 2 + uniform_index(rng, 3);
        TabularMdp mdp = make_synthetic(S, A, 0.9, rng());
        Logits theta = random_logits(S, A, 3.0, rng);
        RegValues vals = reg_values(mdp, softmax_policy(theta), 0.1);
        worst = std::max(worst, sup_norm(expected_actor_grad(mdp, theta, vals.adv) -
                                         exact_gradient(mdp, theta, 0.1)));
    }
    return {worst <= 1e-12, "max abs deviation " + fmt(worst) + " (tol 1e-12)"};
}

// 3. Exact-critic variance bounded through the gradient norm.
Outcome variance_bound() {
    Rng rng(103);
    TabularMdp mdp = make_synthetic(3, 2, 0.9, 103);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        CheckResult r = check_actor_variance_bound(mdp, random_logits(3, 2, 3.0, rng), 0.1);
        worst = std::min(worst, r.slack);
    }
    return {worst >= -1e-10, "min slack " + fmt(worst) + " (tol -1e-10)"};
}

// 4. Nonuniform Lojasiewicz inequality.
Outcome lojasiewicz() {
    Rng rng(104);
    TabularMdp mdp = make_synthetic(3, 2, 0.9, 104);
    const double j_star = optimal_reg_values(mdp, 0.1).j_star;
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
        CheckResult r = check_pl(mdp, random_logits(3, 2, 3.0, rng), 0.1, j_star);
        worst = std::min(worst, r.slack);
    }
    return {worst >= -1e-9, "min slack " + fmt(worst) + " (tol -1e-9)"};
}

// 5. L2 contraction of the deterministic TD operator.
Outcome contraction() {
    Rng rng(105);
    TabularMdp mdp = make_synthetic(3, 2, 0.9, 105);
    Logits uniform_theta = Logits::zeros(3, 2);
    const double tau = 0.5;
    const double eta_c = (1.0 - mdp.gamma) * (1.0 - mdp.gamma) * mdp.rho_min() * tau / 40.0;
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        CheckResult r =
            check_contraction(mdp, uniform_theta, random_matrix(3, 2, 20.0, rng), 0.1, eta_c);
        worst = std::min(worst, r.slack);
    }
    return {worst >= -1e-10, "min slack " + fmt(worst) + " (tol -1e-10)"};
}

// 6. Critic estimator second moment against its closed-form bound.
Outcome critic_second_moment() {
    Rng rng(106);
    TabularMdp mdp = make_synthetic(3, 2, 0.9, 106);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        Logits theta = random_logits(3, 2, 3.0, rng);
        Matrix q = random_matrix(3, 2, 10.0, rng);
        CriticMoments m = critic_estimator_second_moment(mdp, theta, q, 0.1);
        worst = std::min(worst, m.bound - m.variance);
    }
    return {worst >= -1e-10, "min slack " + fmt(worst) + " (tol -1e-10)"};
}

// 7. State-action exploration of the weighted Bellman residual operator.
Outcome monotone_operator() {
    Rng rng(107);
    TabularMdp mdp = make_synthetic(3, 2, 0.9, 107);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 200; ++i) {
        CheckResult r = check_monotone_operator(mdp, random_logits(3, 2, 3.0, rng),
                                                random_matrix(3, 2, 1.0, rng));
        worst = std::min(worst, r.slack);
    }
    return {worst >= -1e-10, "min slack " + fmt(worst) + " (tol -1e-10)"};
}

// 8. Projection operator: simplex preservation, floor, idempotence, and
// statewise L1 optimality.
Outcome projection_suite() {
    Rng rng(108);
    const double tau = 0.005;
    double worst_l1 = std::numeric_limits<double>::infinity();
    double worst_mass = 0.0;
    double worst_floor = std::numeric_limits<double>::infinity();
    bool idempotent = true;

    std::vector<Policy> rows;
    {
        Matrix named(1, 3);
        named(0, 0) = 0.004;
        named(0, 1) = 0.006;
        named(0, 2) = 0.99;
        rows.push_back(Policy::from_probs(named));
    }
    for (int i = 0; i < 10; ++i) rows.push_back(softmax_policy(random_logits(3, 4, 8.0, rng)));

    for (const Policy& pi : rows) {
        const double row_tau = pi.n_actions() == 3 ? 0.01 : tau;
        Rng tie_rng(0);
        Policy once = project_policy(pi, Tau::from_value(row_tau), tie_rng);
        Policy twice = project_policy(once, Tau::from_value(row_tau), tie_rng);
        for (std::size_t i = 0; i < once.probs.size(); ++i)
            idempotent = idempotent && once.probs.data()[i] == twice.probs.data()[i];
        worst_floor = std::min(worst_floor, once.min_prob() - row_tau);
        for (std::size_t s = 0; s < pi.n_states(); ++s) {
            KahanSum before, after;
            for (std::size_t a = 0; a < pi.n_actions(); ++a) {
                before.add(pi.probs(s, a));
                after.add(once.probs(s, a));
            }
            worst_mass = std::max(worst_mass, std::abs(before.value() - after.value()));
        }
        CheckResult r = check_projection_l1(pi, row_tau, 1000, rng);
        worst_l1 = std::min(worst_l1, r.slack);
    }

    const bool passed =
        idempotent && worst_mass <= 1e-15 && worst_floor >= 0.0 && worst_l1 >= -1e-12;
    return {passed, "l1 slack " + fmt(worst_l1) + ", mass drift " + fmt(worst_mass) +
                        ", floor margin " + fmt(worst_floor) +
                        (idempotent ? ", idempotent" : ", NOT idempotent")};
}

// 9. Improvement property of the threshold operator at tau_lambda.
Outcome improvement() {
    Rng rng(109);
    TabularMdp mdp = make_synthetic(2, 2, 0.5, 109);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        Matrix probs(2, 2);
        for (std::size_t s = 0; s < 2; ++s) {
            const double eps = std::exp(uniform_range(rng, std::log(1e-40), std::log(1e-25)));
            const std::size_t low = uniform_index(rng, 2);
            probs(s, low) = eps;
            probs(s, 1 - low) = 1.0 - eps;
        }
        CheckResult r = check_improvement(mdp, Policy::from_probs(std::move(probs)), 2.0);
        worst = std::min(worst, r.slack);
    }
    return {worst >= -1e-12, "min improvement " + fmt(worst) + " (tol -1e-12)"};
}

// 10. Drift of the exact q under one projected actor step.
Outcome q_drift() {
    Rng rng(110);
    TabularMdp mdp = make_synthetic(2, 2, 0.5, 110);
    TrainConfig cfg;
    cfg.lambda = 2.0;
    cfg.eta_a = 0.1;
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        CheckResult r = check_q_drift(mdp, random_logits(2, 2, 3.0, rng), cfg, rng);
        worst = std::min(worst, r.slack);
    }
    return {worst >= -1e-9, "min slack " + fmt(worst) + " (tol -1e-9)"};
}

// 11. Soft performance-difference identity.
Outcome soft_pdl() {
    Rng rng(111);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        TabularMdp mdp = make_synthetic(3, 2, uniform_range(rng, 0.5, 0.95), rng());
        Policy pi1 = softmax_policy(random_logits(3, 2, 3.0, rng));
        Policy pi2 = softmax_policy(random_logits(3, 2, 3.0, rng));
        auto [lhs, rhs] =
            soft_pdl_sides(mdp, pi1, pi2, uniform_range(rng, 0.01, 1.0), uniform_index(rng, 3));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return {worst <= 1e-8, "max |lhs-rhs| " + fmt(worst) + " (tol 1e-8)"};
}

// 12. Exact-critic convergence on the uniform-start 2x2 gridworld.
Outcome exact_critic_convergence() {
    TabularMdp mdp = make_gridworld(2, 2, 0.99, GridInit::Uniform);
    double worst_ratio = 0.0, worst_slope = -std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        TrainConfig cfg;
        cfg.eta_a = 0.1;
        cfg.eta_c = 0.05;
        cfg.critic_steps = 1;
        cfg.iterations = 5000;
        cfg.lambda = 0.05;
        cfg.critic_mode = CriticMode::ExactOracle;
        cfg.seed = seed;
        cfg.eval_every = 10;
        RunTrace trace = run_ent_ac(mdp, cfg);
        if (trace.aborted || trace.records.size() < 3)
            return {false, "run aborted at seed " + std::to_string(seed)};

        const double initial = trace.records.front().subopt;
        const double final = trace.records.back().subopt;
        worst_ratio = std::max(worst_ratio, final / initial);

        // Least-squares slope of log suboptimality against iteration.
        KahanSum sx, sy, sxx, sxy;
        const double n = static_cast<double>(trace.records.size());
        for (const auto& r : trace.records) {
            const double x = static_cast<double>(r.k);
            const double y = std::log(std::max(r.subopt, 1e-300));
            sx.add(x);
            sy.add(y);
            sxx.add(x * x);
            sxy.add(x * y);
        }
        const double slope =
            (n * sxy.value() - sx.value() * sy.value()) /
            (n * sxx.value() - sx.value() * sx.value());
        worst_slope = std::max(worst_slope, slope);
    }
    const bool passed = worst_ratio <= 1e-2 && worst_slope < 0.0;
    return {passed, "worst final/initial subopt " + fmt(worst_ratio) +
                        " (tol 1e-2), worst log-slope " + fmt(worst_slope)};
}

// 13. More critic steps help: grid-searched comparison of H = 8 and H = 64.
Outcome h_monotonicity() {
    fs::path dir = fs::temp_directory_path() / "entac_acceptance_sweep";
    fs::remove_all(dir);

    SweepSpec spec;
    spec.env.type = EnvSpec::Type::Gridworld;
    spec.env.rows = 2;
    spec.env.cols = 2;
    spec.env.gamma = 0.99;
    spec.env.init = GridInit::StartCell;  // paper setup
    spec.lambda = 0.05;
    spec.critic_steps_list = {8, 64};
    spec.eta_a_grid = {0.003, 0.01, 0.03, 0.1};
    spec.eta_c_grid = {0.003, 0.01, 0.03, 0.1};
    spec.n_seeds = 20;
    spec.iterations = 5000;
    spec.eval_every = 100;
    spec.include_exact_oracle = true;
    spec.out_dir = dir.string();

    SweepSummary summary = run_sweep(spec, 0, 1);
    if (!summary.failures.empty())
        return {false, std::to_string(summary.failures.size()) + " runs failed"};

    const SweepArmSummary *low = nullptr, *high = nullptr, *oracle = nullptr;
    for (const auto& arm : summary.arms) {
        if (arm.critic_steps == 8) low = &arm;
        if (arm.critic_steps == 64) high = &arm;
        if (arm.critic_steps == 0) oracle = &arm;
    }
    if (!low || !high || !oracle) return {false, "missing sweep arms"};

    const double n_low = static_cast<double>(low->n_runs);
    const double n_high = static_cast<double>(high->n_runs);
    const double pooled_se = std::sqrt(low->final_std * low->final_std / n_low +
                                       high->final_std * high->final_std / n_high);
    const double gap = high->final_mean - low->final_mean;
    const bool ordered = gap >= pooled_se;
    const bool oracle_dominates = oracle->final_mean >= high->final_mean - 1e-12 &&
                                  oracle->final_mean >= low->final_mean - 1e-12;
    return {ordered && oracle_dominates,
            "mean(H=64)-mean(H=8) = " + fmt(gap) + ", pooled SE " + fmt(pooled_se) +
                ", oracle mean " + fmt(oracle->final_mean) + " vs " + fmt(high->final_mean)};
}

// 14. Frozen-policy TD settles below the predicted noise floor.
Outcome fixed_policy_td() {
    TabularMdp mdp = make_synthetic(3, 2, 0.9, 2);
    Logits theta = Logits::zeros(3, 2);
    const double lambda = 0.05, eta_c = 0.05;
    RegValues vals = reg_values(mdp, softmax_policy(theta), lambda);

    KahanSum mse;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        Matrix q = critic_inner_loop(mdp, theta, Matrix(3, 2, 0.0), 20000, eta_c, lambda, rng);
        mse.add(l2_norm_sq(q - vals.q));
    }
    const double mean_mse = mse.value() / 20.0;

    // Constants evaluated at the frozen policy's min prob.
    ConstantsReport rep = constants_report(mdp, lambda, Tau::from_value(0.5), 0.1, eta_c,
                                           Matrix());
    const double floor = 10.0 * eta_c * rep.critic_sigma_sq / rep.critic_mu;
    return {mean_mse <= floor,
            "mean MSE " + fmt(mean_mse) + " vs floor " + fmt(floor)};
}

// 15. Auxiliary inequality suite.
Outcome aux_inequalities() {
    std::size_t failures = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (const CheckResult& r : check_aux_inequalities(115)) {
        if (!r.passed) ++failures;
        worst = std::min(worst, r.slack);
    }
    return {failures == 0, std::to_string(failures) + " failures, min slack " + fmt(worst)};
}

// 16. Byte-identical reruns of train and sweep CSV outputs.
Outcome determinism() {
    TabularMdp mdp = make_gridworld(2, 2, 0.99, GridInit::Uniform);
    TrainConfig cfg;
    cfg.eta_a = 0.1;
    cfg.eta_c = 0.05;
    cfg.critic_steps = 8;
    cfg.iterations = 300;
    cfg.lambda = 0.05;
    cfg.seed = 7;
    const std::string train_a = trace_to_csv(run_ent_ac(mdp, cfg));
    const std::string train_b = trace_to_csv(run_ent_ac(mdp, cfg));
    if (train_a != train_b) return {false, "train CSVs differ between reruns"};

    SweepSpec spec;
    spec.env.type = EnvSpec::Type::Gridworld;
    spec.env.rows = 2;
    spec.env.cols = 2;
    spec.env.gamma = 0.95;
    spec.env.init = GridInit::Uniform;
    spec.lambda = 0.05;
    spec.critic_steps_list = {4};
    spec.eta_a_grid = {0.03, 0.1};
    spec.eta_c_grid = {0.05};
    spec.n_seeds = 3;
    spec.iterations = 200;
    spec.eval_every = 20;

    fs::path dir_a = fs::temp_directory_path() / "entac_det_a";
    fs::path dir_b = fs::temp_directory_path() / "entac_det_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    spec.out_dir = dir_a.string();
    run_sweep(spec, 3, 1);
    spec.out_dir = dir_b.string();
    run_sweep(spec, 3, 2);

    if (slurp(dir_a / "aggregate.csv") != slurp(dir_b / "aggregate.csv"))
        return {false, "sweep aggregates differ"};
    for (int seed = 0; seed < 3; ++seed) {
        const std::string name = "H4_seed" + std::to_string(seed) + ".csv";
        if (slurp(dir_a / "runs" / name) != slurp(dir_b / "runs" / name))
            return {false, "per-run CSV " + name + " differs"};
    }
    return {true, "train and sweep outputs byte-identical"};
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0 = unlimited
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "gradient-fidelity", 5.0, gradient_fidelity},
        {2, "unbiasedness", 5.0, unbiasedness},
        {3, "variance-bound", 10.0, variance_bound},
        {4, "lojasiewicz", 30.0, lojasiewicz},
        {5, "bellman-contraction", 10.0, contraction},
        {6, "critic-second-moment", 10.0, critic_second_moment},
        {7, "monotone-operator", 5.0, monotone_operator},
        {8, "projection-suite", 5.0, projection_suite},
        {9, "improvement-lemma", 10.0, improvement},
        {10, "q-drift", 30.0, q_drift},
        {11, "soft-performance-difference", 10.0, soft_pdl},
        {12, "exact-critic-convergence", 120.0, exact_critic_convergence},
        {13, "h-monotonicity", 900.0, h_monotonicity},
        {14, "fixed-policy-td", 60.0, fixed_policy_td},
        {15, "aux-inequalities", 30.0, aux_inequalities},
        {16, "determinism", 0.0, determinism},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    bool all_passed = true;
    for (const Criterion& c : criteria()) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;

        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        const bool in_time = c.limit_seconds == 0.0 || elapsed <= c.limit_seconds;
        const bool passed = outcome.passed && in_time;
        all_passed = all_passed && passed;
        std::printf("[%s] %02d %s: %s [%.2fs%s]\n", passed ? "PASS" : "FAIL", c.id, c.name,
                    outcome.detail.c_str(), elapsed,
                    in_time ? "" : (" > limit " + fmt(c.limit_seconds) + "s").c_str());
        std::fflush(stdout);
    }
    return all_passed ? 0 : 1;
}
