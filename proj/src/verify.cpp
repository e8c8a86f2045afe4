#include "entac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "entac/sampling.hpp"
#include "json.hpp"

namespace entac {

namespace {

Logits rand_logits(std::size_t n_states, std::size_t n_actions, double range, Rng& rng) {
    Logits theta = Logits::zeros(n_states, n_actions);
    for (std::size_t i = 0; i < theta.theta.size(); ++i)
        theta.theta.data()[i] = uniform_range(rng, -range, range);
    return theta;
}

Matrix rand_matrix(std::size_t rows, std::size_t cols, double range, Rng& rng) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = uniform_range(rng, -range, range);
    return m;
}

Vector rand_simplex(std::size_t n, Rng& rng) {
    Vector p(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = exponential1(rng);
        total += p[i];
    }
    for (std::size_t i = 0; i < n; ++i) p[i] /= total;
    return p;
}

double kl_discrete(const Vector& p, const Vector& q) {
    KahanSum kl;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        kl.add(p[i] * std::log(p[i] / q[i]));
    }
    return kl.value();
}

std::string instance_witness(std::size_t index, std::uint64_t seed) {
    std::ostringstream os;
    os << "{\"instance\":" << index << ",\"seed\":" << seed << "}";
    return os.str();
}

/// Tracks the worst slack over a batch of instances.
struct WorstSlack {
    double slack = std::numeric_limits<double>::infinity();
    std::size_t index = 0;

    void update(double s, std::size_t i) {
        if (s < slack) {
            slack = s;
            index = i;
        }
    }
};

}  // namespace

CheckResult CheckResult::from_slack(std::string name, double slack, double tolerance,
                                    std::string witness) {
    CheckResult r;
    r.name = std::move(name);
    r.slack = slack;
    r.tolerance = tolerance;
    r.passed = slack >= -tolerance;
    r.witness = std::move(witness);
    return r;
}

Matrix finite_diff_gradient(const TabularMdp& mdp, const Logits& theta, double lambda, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite_diff_gradient: h must be positive");
    Matrix grad(theta.n_states(), theta.n_actions());
    Logits probe = theta;
    for (std::size_t i = 0; i < probe.theta.size(); ++i) {
        const double saved = probe.theta.data()[i];
        probe.theta.data()[i] = saved + h;
        const double plus = reg_objective(mdp, softmax_policy(probe), lambda);
        probe.theta.data()[i] = saved - h;
        const double minus = reg_objective(mdp, softmax_policy(probe), lambda);
        probe.theta.data()[i] = saved;
        grad.data()[i] = (plus - minus) / (2.0 * h);
    }
    return grad;
}

CheckResult check_actor_variance_bound(const TabularMdp& mdp, const Logits& theta, double lambda) {
    const double rho_min = mdp.rho_min();
    if (!(rho_min > 0.0))
        throw std::invalid_argument("check_actor_variance_bound: requires rho_min > 0");

    Policy pi = softmax_policy(theta);
    RegValues vals = reg_values(mdp, pi, lambda);
    ActorMoments m = actor_bias_variance(mdp, theta, vals.adv, lambda);
    Matrix grad = exact_gradient(mdp, theta, lambda);
    const double bound =
        l2_norm_sq(grad) / ((1.0 - mdp.gamma) * pi.min_prob() * rho_min);
    return CheckResult::from_slack("actor_variance_bound", bound - m.mean_sq_dev, 1e-10);
}

CheckResult check_pl(const TabularMdp& mdp, const Logits& theta, double lambda, double j_star) {
    if (std::isnan(j_star)) j_star = optimal_reg_values(mdp, lambda).j_star;
    Policy pi = softmax_policy(theta);
    const double objective = reg_objective(mdp, pi, lambda);
    Matrix grad = exact_gradient(mdp, theta, lambda);
    const double mu = pl_coefficient(mdp, theta, lambda);
    const double slack = l2_norm_sq(grad) - mu * (j_star - objective);
    return CheckResult::from_slack("pl_inequality", slack, 1e-9);
}

CheckResult check_contraction(const TabularMdp& mdp, const Logits& theta, const Matrix& q,
                              double lambda, double eta_c) {
    Policy pi = softmax_policy(theta);
    const double tau = pi.min_prob();  // tightest valid threshold
    const double rho_min = mdp.rho_min();
    const double one_minus = 1.0 - mdp.gamma;
    const double factor = 1.0 - eta_c * one_minus * one_minus * rho_min * tau +
                          eta_c * eta_c * (1.0 + mdp.gamma) * (1.0 + mdp.gamma);

    RegValues vals = reg_values(mdp, pi, lambda);
    Matrix mapped = deterministic_td_operator(mdp, theta, q, lambda, eta_c);
    const double before = l2_norm_sq(vals.q - q);
    const double after = l2_norm_sq(vals.q - mapped);
    return CheckResult::from_slack("bellman_contraction", factor * before - after, 1e-10);
}

CheckResult check_monotone_operator(const TabularMdp& mdp, const Logits& theta, const Matrix& v) {
    const double rho_min = mdp.rho_min();
    if (!(rho_min > 0.0))
        throw std::invalid_argument("check_monotone_operator: requires rho_min > 0");
    Policy pi = softmax_policy(theta);
    Occupancy occ = occupancy(mdp, pi);
    const std::size_t S = mdp.n_states, A = mdp.n_actions;

    // Soft backup of v through P~, reusing the TD operator structure with
    // lambda = 0 and no reward.
    Vector backup(S);
    for (std::size_t s2 = 0; s2 < S; ++s2) {
        KahanSum acc;
        for (std::size_t a2 = 0; a2 < A; ++a2) acc.add(pi.probs(s2, a2) * v(s2, a2));
        backup[s2] = acc.value();
    }
    KahanSum inner;
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a) {
            KahanSum next;
            for (std::size_t s2 = 0; s2 < S; ++s2) next.add(mdp.p(s, a, s2) * backup[s2]);
            const double mapped = occ.d[s] * pi.probs(s, a) * (v(s, a) - mdp.gamma * next.value());
            inner.add(mapped * v(s, a));
        }

    const double one_minus = 1.0 - mdp.gamma;
    const double bound =
        0.5 * one_minus * one_minus * rho_min * pi.min_prob() * l2_norm_sq(v);
    return CheckResult::from_slack("monotone_operator", inner.value() - bound, 1e-10);
}

CheckResult check_improvement(const TabularMdp& mdp, const Policy& pi, double lambda) {
    Tau tau = tau_lambda(mdp, lambda);
    if (!tau.enabled()) {
        CheckResult r = CheckResult::from_slack("improvement", 0.0, 0.0,
                                                "{\"skipped\":\"tau_lambda underflowed\"}");
        return r;
    }
    Rng rng(0);  // tie-breaks only; any choice satisfies the lemma
    Policy projected = project_policy(pi, tau, rng);
    const double before = reg_objective(mdp, pi, lambda);
    const double after = reg_objective(mdp, projected, lambda);
    return CheckResult::from_slack("improvement", after - before, 1e-12);
}

CheckResult check_projection_l1(const Policy& pi, double tau, std::size_t n_trials, Rng& rng) {
    const std::size_t S = pi.n_states(), A = pi.n_actions();
    if (!(tau > 0.0 && tau < 1.0 / (2.0 * static_cast<double>(A * A))))
        throw std::invalid_argument("check_projection_l1: tau outside (0, 1/(2|A|^2))");

    Rng tie_rng(0);
    Policy proj = project_policy(pi, Tau::from_value(tau), tie_rng);

    Vector proj_dist(S, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        KahanSum row;
        for (std::size_t a = 0; a < A; ++a) row.add(std::abs(pi.probs(s, a) - proj.probs(s, a)));
        proj_dist[s] = row.value();
    }

    WorstSlack worst;
    for (std::size_t t = 0; t < n_trials; ++t) {
        for (std::size_t s = 0; s < S; ++s) {
            // Random member of the tau-interior of the simplex.
            Vector u = rand_simplex(A, rng);
            KahanSum row;
            for (std::size_t a = 0; a < A; ++a) {
                const double candidate = tau + (1.0 - static_cast<double>(A) * tau) * u[a];
                row.add(std::abs(pi.probs(s, a) - candidate));
            }
            worst.update(row.value() - proj_dist[s], t);
        }
    }
    return CheckResult::from_slack("projection_l1", worst.slack, 1e-12,
                                   instance_witness(worst.index, 0));
}

CheckResult check_q_drift(const TabularMdp& mdp, const Logits& theta, const TrainConfig& config,
                          Rng& rng) {
    const Tau tau = config.tau_mode == TauMode::Fixed ? Tau::from_value(config.fixed_tau)
                                                      : tau_lambda(mdp, config.lambda);
    if (!tau.enabled())
        throw std::invalid_argument("check_q_drift: requires a representable tau");

    Policy pi = softmax_policy(theta);
    if (pi.min_prob() < tau.tau)
        throw std::invalid_argument("check_q_drift: theta must lie in the tau-interior");

    Occupancy occ = occupancy(mdp, pi);
    RegValues vals = reg_values(mdp, pi, config.lambda);
    CriticState critic = advantage_from_q(vals.q, pi, config.lambda);

    ActorDist adist = actor_dist(mdp, pi, occ);
    auto [s, a] = sample_actor(adist, rng);
    Logits next = actor_step(theta, s, a, critic, config.eta_a, mdp.gamma, tau, rng);
    RegValues vals_next = reg_values(mdp, softmax_policy(next), config.lambda);

    const double lhs = std::sqrt(l2_norm_sq(vals_next.q - vals.q));
    const double sa = static_cast<double>(mdp.n_states * mdp.n_actions);
    const double log_a = std::log(static_cast<double>(mdp.n_actions));
    const double one_minus = 1.0 - mdp.gamma;
    const double c_tilde = std::sqrt(sa) * 2.0 * mdp.gamma / one_minus *
                           ((1.0 + config.lambda * log_a) / one_minus +
                            config.lambda * std::log(1.0 / tau.tau) +
                            config.lambda / (2.0 * tau.tau));
    const double rhs = c_tilde * config.eta_a * std::abs(critic.adv_hat(s, a));
    return CheckResult::from_slack("q_drift", rhs - lhs, 1e-9);
}

std::vector<CheckResult> check_aux_inequalities(std::uint64_t seed) {
    constexpr std::size_t kInstances = 10000;
    Rng rng(seed);
    std::vector<CheckResult> results;

    {  // Pinsker: ||p - q||_1 / 2 <= sqrt(KL(p||q) / 2)
        WorstSlack worst;
        for (std::size_t i = 0; i < kInstances; ++i) {
            const std::size_t n = 2 + uniform_index(rng, 7);
            Vector p = rand_simplex(n, rng), q = rand_simplex(n, rng);
            double l1 = 0.0;
            for (std::size_t j = 0; j < n; ++j) l1 += std::abs(p[j] - q[j]);
            worst.update(std::sqrt(kl_discrete(p, q) / 2.0) - 0.5 * l1, i);
        }
        results.push_back(CheckResult::from_slack("pinsker", worst.slack, 1e-12,
                                                  instance_witness(worst.index, seed)));
    }
    {  // KL upper bound: KL(p||q) <= ||p - q||_1 / (2 q_min)
        WorstSlack worst;
        for (std::size_t i = 0; i < kInstances; ++i) {
            const std::size_t n = 2 + uniform_index(rng, 7);
            Vector p = rand_simplex(n, rng), q = rand_simplex(n, rng);
            double l1 = 0.0, q_min = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                l1 += std::abs(p[j] - q[j]);
                q_min = std::min(q_min, q[j]);
            }
            worst.update(l1 / (2.0 * q_min) - kl_discrete(p, q), i);
        }
        results.push_back(CheckResult::from_slack("kl_upper_bound", worst.slack, 1e-12,
                                                  instance_witness(worst.index, seed)));
    }
    {  // KL-logit: KL(softmax t || softmax t') <= ||t - t' - c 1||_inf^2 / 2
        WorstSlack worst;
        for (std::size_t i = 0; i < kInstances; ++i) {
            const std::size_t n = 2 + uniform_index(rng, 7);
            Logits t1 = rand_logits(1, n, 5.0, rng), t2 = rand_logits(1, n, 5.0, rng);
            Policy p1 = softmax_policy(t1), p2 = softmax_policy(t2);
            KahanSum kl;
            for (std::size_t j = 0; j < n; ++j)
                kl.add(p1.probs(0, j) * (p1.log_probs(0, j) - p2.log_probs(0, j)));
            double lo = t1.theta(0, 0) - t2.theta(0, 0), hi = lo;
            for (std::size_t j = 1; j < n; ++j) {
                const double d = t1.theta(0, j) - t2.theta(0, j);
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
            const double half_range = 0.5 * (hi - lo);  // best centering constant
            worst.update(0.5 * half_range * half_range - kl.value(), i);
        }
        results.push_back(CheckResult::from_slack("kl_logit", worst.slack, 1e-12,
                                                  instance_witness(worst.index, seed)));
    }
    {  // sum p log^2 p <= 1 + log^2 n
        WorstSlack worst;
        for (std::size_t i = 0; i < kInstances; ++i) {
            const std::size_t n = 1 + uniform_index(rng, 16);
            Vector p = rand_simplex(n, rng);
            KahanSum acc;
            for (double x : p)
                if (x > 0.0) acc.add(x * std::log(x) * std::log(x));
            const double log_n = std::log(static_cast<double>(n));
            worst.update(1.0 + log_n * log_n - acc.value(), i);
        }
        results.push_back(CheckResult::from_slack("p_log2_p", worst.slack, 1e-12,
                                                  instance_witness(worst.index, seed)));
    }
    {  // ||q||_inf <= (1 + lambda log|A|) / (1 - gamma)
        WorstSlack worst;
        for (std::size_t i = 0; i < 200; ++i) {  // each instance needs a linear solve
            const std::size_t S = 2 + uniform_index(rng, 4);
            const std::size_t A = 2 + uniform_index(rng, 3);
            const double gamma = uniform_range(rng, 0.3, 0.95);
            const double lambda = uniform_range(rng, 0.0, 2.0);
            TabularMdp mdp = make_synthetic(S, A, gamma, rng());
            Logits theta = rand_logits(S, A, 3.0, rng);
            RegValues vals = reg_values(mdp, softmax_policy(theta), lambda);
            const double bound =
                (1.0 + lambda * std::log(static_cast<double>(A))) / (1.0 - gamma);
            worst.update(bound - sup_norm(vals.q), i);
        }
        results.push_back(CheckResult::from_slack("q_value_bound", worst.slack, 1e-9,
                                                  instance_witness(worst.index, seed)));
    }
    return results;
}

namespace {

CheckResult batch_min(std::string name, const std::vector<CheckResult>& parts,
                      std::uint64_t seed) {
    CheckResult out;
    out.name = std::move(name);
    out.passed = true;
    out.slack = std::numeric_limits<double>::infinity();
    std::size_t worst_index = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out.passed = out.passed && parts[i].passed;
        if (parts[i].slack < out.slack) {
            out.slack = parts[i].slack;
            out.tolerance = parts[i].tolerance;
            worst_index = i;
        }
    }
    out.witness = instance_witness(worst_index, seed);
    return out;
}

std::vector<CheckResult> suite_gradients(std::uint64_t seed) {
    std::vector<CheckResult> results;
    Rng rng(seed);

    {  // exact gradient vs central finite differences
        double worst_rel = 0.0;
        for (std::size_t i = 0; i < 10; ++i) {
            TabularMdp mdp = make_synthetic(5, 3, 0.9, rng());
            Logits theta = rand_logits(5, 3, 3.0, rng);
            Matrix exact = exact_gradient(mdp, theta, 0.1);
            Matrix fd = finite_diff_gradient(mdp, theta, 0.1, 1e-5);
            const double scale = std::max(sup_norm(exact), 1e-12);
            worst_rel = std::max(worst_rel, sup_norm(fd - exact) / scale);
        }
        results.push_back(CheckResult::from_slack("gradient_vs_finite_diff", 1e-5 - worst_rel,
                                                  0.0, instance_witness(0, seed)));
    }
    {  // E[g_a] with the exact advantage equals the exact gradient
        double worst = 0.0;
        for (std::size_t i = 0; i < 20; ++i) {
            const std::size_t S = 3 + uniform_index(rng, 4), A = 2 + uniform_index(rng, 3);
            TabularMdp mdp = make_synthetic(S, A, 0.9, rng());
            Logits theta = rand_logits(S, A, 3.0, rng);
            RegValues vals = reg_values(mdp, softmax_policy(theta), 0.1);
            Matrix mean = expected_actor_grad(mdp, theta, vals.adv);
            Matrix grad = exact_gradient(mdp, theta, 0.1);
            worst = std::max(worst, sup_norm(mean - grad));
        }
        results.push_back(
            CheckResult::from_slack("unbiasedness", 1e-12 - worst, 0.0, instance_witness(0, seed)));
    }
    {  // Lojasiewicz over 1000 random logits
        TabularMdp mdp = make_synthetic(3, 2, 0.9, seed);
        const double j_star = optimal_reg_values(mdp, 0.1).j_star;
        std::vector<CheckResult> parts;
        for (std::size_t i = 0; i < 1000; ++i)
            parts.push_back(check_pl(mdp, rand_logits(3, 2, 3.0, rng), 0.1, j_star));
        results.push_back(batch_min("pl_inequality", parts, seed));
    }
    {  // soft performance-difference identity on 50 random tuples
        WorstSlack worst;
        for (std::size_t i = 0; i < 50; ++i) {
            const std::size_t S = 3, A = 2;
            TabularMdp mdp = make_synthetic(S, A, uniform_range(rng, 0.5, 0.95), rng());
            Policy pi1 = softmax_policy(rand_logits(S, A, 3.0, rng));
            Policy pi2 = softmax_policy(rand_logits(S, A, 3.0, rng));
            const std::size_t s = uniform_index(rng, S);
            auto [lhs, rhs] = soft_pdl_sides(mdp, pi1, pi2, uniform_range(rng, 0.01, 1.0), s);
            worst.update(1e-8 - std::abs(lhs - rhs), i);
        }
        results.push_back(CheckResult::from_slack("soft_pdl", worst.slack, 0.0,
                                                  instance_witness(worst.index, seed)));
    }
    return results;
}

std::vector<CheckResult> suite_variance(std::uint64_t seed) {
    std::vector<CheckResult> results;
    Rng rng(seed);
    TabularMdp mdp = make_synthetic(3, 2, 0.9, seed);

    {
        std::vector<CheckResult> parts;
        for (std::size_t i = 0; i < 100; ++i)
            parts.push_back(check_actor_variance_bound(mdp, rand_logits(3, 2, 3.0, rng), 0.1));
        results.push_back(batch_min("actor_variance_bound", parts, seed));
    }
    {
        WorstSlack worst;
        for (std::size_t i = 0; i < 100; ++i) {
            Logits theta = rand_logits(3, 2, 3.0, rng);
            Matrix q = rand_matrix(3, 2, 10.0, rng);
            CriticMoments m = critic_estimator_second_moment(mdp, theta, q, 0.1);
            worst.update(m.bound - m.variance, i);
        }
        results.push_back(CheckResult::from_slack("critic_second_moment", worst.slack, 1e-10,
                                                  instance_witness(worst.index, seed)));
    }
    return results;
}

std::vector<CheckResult> suite_contraction(std::uint64_t seed) {
    std::vector<CheckResult> results;
    Rng rng(seed);
    TabularMdp mdp = make_synthetic(3, 2, 0.9, seed);
    Logits uniform_theta = Logits::zeros(3, 2);
    const double tau = 0.5;  // min prob of the uniform 2-action policy
    const double eta_c =
        (1.0 - mdp.gamma) * (1.0 - mdp.gamma) * mdp.rho_min() * tau / 40.0;

    {
        std::vector<CheckResult> parts;
        for (std::size_t i = 0; i < 100; ++i)
            parts.push_back(
                check_contraction(mdp, uniform_theta, rand_matrix(3, 2, 20.0, rng), 0.1, eta_c));
        results.push_back(batch_min("bellman_contraction", parts, seed));
    }
    {
        std::vector<CheckResult> parts;
        for (std::size_t i = 0; i < 200; ++i)
            parts.push_back(check_monotone_operator(mdp, rand_logits(3, 2, 3.0, rng),
                                                    rand_matrix(3, 2, 1.0, rng)));
        results.push_back(batch_min("monotone_operator", parts, seed));
    }
    {  // q drift in the representable-tau regime
        TabularMdp drift_mdp = make_synthetic(2, 2, 0.5, seed + 1);
        TrainConfig cfg;
        cfg.lambda = 2.0;
        cfg.eta_a = 0.1;
        std::vector<CheckResult> parts;
        for (std::size_t i = 0; i < 100; ++i)
            parts.push_back(check_q_drift(drift_mdp, rand_logits(2, 2, 3.0, rng), cfg, rng));
        results.push_back(batch_min("q_drift", parts, seed));
    }
    return results;
}

std::vector<CheckResult> suite_projection(std::uint64_t seed) {
    std::vector<CheckResult> results;
    Rng rng(seed);

    {  // L1 optimality on the named row plus random policies
        std::vector<CheckResult> parts;
        Matrix named(1, 3);
        named(0, 0) = 0.004;
        named(0, 1) = 0.006;
        named(0, 2) = 0.99;
        parts.push_back(check_projection_l1(Policy::from_probs(named), 0.01, 1000, rng));
        for (std::size_t i = 0; i < 5; ++i) {
            Policy pi = softmax_policy(rand_logits(3, 4, 8.0, rng));
            parts.push_back(check_projection_l1(pi, 0.005, 1000, rng));
        }
        results.push_back(batch_min("projection_l1", parts, seed));
    }
    {  // idempotence (exact), mass conservation, min >= tau
        double worst = std::numeric_limits<double>::infinity();
        bool exact_idempotent = true;
        for (std::size_t i = 0; i < 200; ++i) {
            Policy pi = softmax_policy(rand_logits(3, 4, 8.0, rng));
            Tau tau = Tau::from_value(0.01);
            Rng tie_rng(i);
            Policy once = project_policy(pi, tau, tie_rng);
            Policy twice = project_policy(once, tau, tie_rng);
            for (std::size_t j = 0; j < once.probs.size(); ++j)
                exact_idempotent =
                    exact_idempotent && once.probs.data()[j] == twice.probs.data()[j];
            for (std::size_t s = 0; s < 3; ++s) {
                KahanSum in_row, out_row;
                for (std::size_t a = 0; a < 4; ++a) {
                    in_row.add(pi.probs(s, a));
                    out_row.add(once.probs(s, a));
                }
                worst = std::min(worst, 1e-15 - std::abs(in_row.value() - out_row.value()));
            }
            worst = std::min(worst, once.min_prob() - tau.tau);
        }
        CheckResult r = CheckResult::from_slack("projection_invariants", worst, 0.0,
                                                instance_witness(0, seed));
        r.passed = r.passed && exact_idempotent;
        results.push_back(r);
    }
    {  // improvement lemma in the gamma=0.5, lambda=2 regime
        TabularMdp mdp = make_synthetic(2, 2, 0.5, seed);
        std::vector<CheckResult> parts;
        for (std::size_t i = 0; i < 100; ++i) {
            Matrix probs(2, 2);
            for (std::size_t s = 0; s < 2; ++s) {
                // near-deterministic rows with mass far below tau_lambda
                const double eps = std::exp(uniform_range(rng, std::log(1e-40), std::log(1e-25)));
                const std::size_t low = uniform_index(rng, 2);
                probs(s, low) = eps;
                probs(s, 1 - low) = 1.0 - eps;
            }
            parts.push_back(check_improvement(mdp, Policy::from_probs(std::move(probs)), 2.0));
        }
        results.push_back(batch_min("improvement", parts, seed));
    }
    return results;
}

}  // namespace

std::vector<CheckResult> run_check_suite(const std::string& suite, std::uint64_t seed) {
    if (suite == "gradients") return suite_gradients(seed);
    if (suite == "variance") return suite_variance(seed);
    if (suite == "contraction") return suite_contraction(seed);
    if (suite == "projection") return suite_projection(seed);
    if (suite == "aux") return check_aux_inequalities(seed);
    if (suite == "all") {
        std::vector<CheckResult> all;
        for (const char* name : {"gradients", "variance", "contraction", "projection", "aux"}) {
            auto part = run_check_suite(name, seed);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw std::invalid_argument("unknown check suite: " + suite);
}

std::string check_result_json(const CheckResult& r) {
    nlohmann::json j;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["slack"] = std::isfinite(r.slack) ? nlohmann::json(r.slack)
                                        : nlohmann::json(r.slack > 0 ? "inf" : "-inf");
    j["tolerance"] = r.tolerance;
    j["witness"] = r.witness;
    return j.dump();
}

}  // namespace entac
