#include "entac/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json_detail.hpp"

namespace entac {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool all_finite(const Matrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!std::isfinite(m.data()[i])) return false;
    return true;
}

Tau resolve_tau(const TabularMdp& mdp, const TrainConfig& config) {
    switch (config.tau_mode) {
        case TauMode::AutoTauLambda: return tau_lambda(mdp, config.lambda);
        case TauMode::Fixed: return Tau::from_value(config.fixed_tau);
        case TauMode::Disabled: return Tau::disabled();
    }
    return Tau::disabled();
}

}  // namespace

CriticState advantage_from_q(const Matrix& q_hat, const Policy& policy, double lambda) {
    const std::size_t S = policy.n_states(), A = policy.n_actions();
    if (q_hat.rows() != S || q_hat.cols() != A)
        throw std::invalid_argument("advantage_from_q: shape mismatch");

    CriticState st;
    st.q_hat = q_hat;
    st.v_hat = Vector(S);
    st.adv_hat = Matrix(S, A);
    for (std::size_t s = 0; s < S; ++s) {
        KahanSum v;
        for (std::size_t a = 0; a < A; ++a) {
            const double p = policy.probs(s, a);
            if (p == 0.0) continue;
            v.add(p * (q_hat(s, a) - lambda * policy.log_probs(s, a)));
        }
        st.v_hat[s] = v.value();
        for (std::size_t a = 0; a < A; ++a)
            st.adv_hat(s, a) = q_hat(s, a) - lambda * policy.log_probs(s, a) - st.v_hat[s];
    }
    return st;
}

CriticState advantage_from_q(const Matrix& q_hat, const Logits& theta, double lambda) {
    return advantage_from_q(q_hat, softmax_policy(theta), lambda);
}

Matrix critic_inner_loop(const TabularMdp& mdp, const Logits& theta, const Matrix& q_start,
                         std::size_t steps, double eta_c, double lambda, Rng& rng) {
    Policy pi = softmax_policy(theta);
    Occupancy occ = occupancy(mdp, pi);
    CriticDist dist = critic_dist(mdp, pi, occ);

    Matrix q = q_start;
    for (std::size_t h = 0; h < steps; ++h) {
        CriticSample x = sample_critic(dist, rng);
        SparseUpdate u = td_update(x, dist.policy, q, lambda, mdp);
        q(u.s, u.a) += eta_c * u.value;
    }
    return q;
}

Logits actor_step(const Logits& theta, std::size_t s, std::size_t a, const CriticState& critic,
                  double eta_a, double gamma, const Tau& tau, Rng& rng) {
    Logits out = theta;
    SparseUpdate g = actor_grad_estimate(s, a, critic.adv_hat, gamma);
    out.theta(g.s, g.a) += eta_a * g.value;
    return project_logits(out, tau, rng);
}

RunTrace run_ent_ac(const TabularMdp& mdp, const TrainConfig& config) {
    auto violations = validate(mdp);
    if (!violations.empty())
        throw std::invalid_argument("run_ent_ac: invalid mdp: " + violations.front());
    if (!(config.eta_a > 0.0) || !(config.eta_c > 0.0))
        throw std::invalid_argument("run_ent_ac: step sizes must be positive");
    if (!(config.lambda > 0.0))
        throw std::invalid_argument("run_ent_ac: lambda must be positive");
    if (config.critic_steps == 0)
        throw std::invalid_argument("run_ent_ac: critic_steps must be at least 1");
    if (config.eval_every == 0)
        throw std::invalid_argument("run_ent_ac: eval_every must be at least 1");
    if (!config.q_init.empty() &&
        (config.q_init.rows() != mdp.n_states || config.q_init.cols() != mdp.n_actions))
        throw std::invalid_argument("run_ent_ac: q_init shape mismatch");
    if (config.deterministic_gradient && config.critic_mode != CriticMode::ExactOracle)
        throw std::invalid_argument(
            "run_ent_ac: deterministic_gradient requires exact-oracle critic mode");

    const auto start = Clock::now();
    const std::size_t S = mdp.n_states, A = mdp.n_actions;
    const Tau tau = resolve_tau(mdp, config);
    const SoftSolution opt = optimal_reg_values(mdp, config.lambda);

    RunTrace trace;
    trace.config = config;
    trace.j_star = opt.j_star;
    trace.constants = constants_report(mdp, config.lambda, tau, config.eta_a, config.eta_c,
                                       config.q_init);

    Rng rng(config.seed);
    Logits theta = Logits::zeros(S, A);
    Matrix q_hat = config.q_init.empty() ? Matrix::zeros(S, A) : config.q_init;

    // Evaluation is exact planning; critic_mse compares the critic the
    // actor sees at k against the true q of theta_k (identically zero in
    // oracle mode).
    auto record = [&](std::size_t k, const Policy& pi, const Occupancy& occ,
                      const RegValues& vals, const Matrix& q_used) {
        TraceRecord r;
        r.k = k;
        KahanSum j;
        for (std::size_t s = 0; s < S; ++s) j.add(mdp.init_dist[s] * vals.v[s]);
        r.objective = j.value();
        r.subopt = trace.j_star - r.objective;
        KahanSum g2;
        const double scale = 1.0 / (1.0 - mdp.gamma);
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t a = 0; a < A; ++a) {
                const double g = scale * occ.d[s] * pi.probs(s, a) * vals.adv(s, a);
                g2.add(g * g);
            }
        r.grad_norm = std::sqrt(g2.value());
        r.critic_mse = l2_norm_sq(q_used - vals.q);
        r.policy_min = pi.min_prob();
        r.wall_seconds = seconds_since(start);
        trace.records.push_back(r);
    };

    for (std::size_t k = 0; k < config.iterations; ++k) {
        Policy pi = softmax_policy(theta);
        Occupancy occ = occupancy(mdp, pi);

        RegValues oracle_vals;  // filled in oracle mode (doubles as evaluation)
        if (config.critic_mode == CriticMode::ExactOracle) {
            oracle_vals = reg_values(mdp, pi, config.lambda);
            q_hat = oracle_vals.q;
        } else {
            CriticDist dist = critic_dist(mdp, pi, occ);
            for (std::size_t h = 0; h < config.critic_steps; ++h) {
                CriticSample x = sample_critic(dist, rng);
                SparseUpdate u = td_update(x, pi, q_hat, config.lambda, mdp);
                q_hat(u.s, u.a) += config.eta_c * u.value;
            }
            if (!all_finite(q_hat)) {
                trace.aborted = true;
                std::ostringstream os;
                os << "non-finite critic at iteration " << k;
                trace.abort_reason = os.str();
                break;
            }
        }

        CriticState critic = advantage_from_q(q_hat, pi, config.lambda);

        if (k % config.eval_every == 0) {
            const RegValues& vals = config.critic_mode == CriticMode::ExactOracle
                                        ? oracle_vals
                                        : reg_values(mdp, pi, config.lambda);
            record(k, pi, occ, vals, q_hat);
        }

        if (config.deterministic_gradient) {
            const double scale = config.eta_a / (1.0 - mdp.gamma);
            for (std::size_t s = 0; s < S; ++s)
                for (std::size_t a = 0; a < A; ++a)
                    theta.theta(s, a) += scale * occ.d[s] * pi.probs(s, a) * oracle_vals.adv(s, a);
            theta = project_logits(theta, tau, rng);
        } else {
            ActorDist adist = actor_dist(mdp, pi, occ);
            auto [ys, ya] = sample_actor(adist, rng);
            theta = actor_step(theta, ys, ya, critic, config.eta_a, mdp.gamma, tau, rng);
        }

        if (!all_finite(theta.theta)) {
            trace.aborted = true;
            std::ostringstream os;
            os << "non-finite logits after iteration " << k;
            trace.abort_reason = os.str();
            break;
        }
    }

    if (!trace.aborted) {
        Policy pi = softmax_policy(theta);
        Occupancy occ = occupancy(mdp, pi);
        RegValues vals = reg_values(mdp, pi, config.lambda);
        const Matrix& q_used =
            config.critic_mode == CriticMode::ExactOracle ? vals.q : q_hat;
        record(config.iterations, pi, occ, vals, q_used);
        trace.final_policy = pi;
    } else {
        trace.final_policy = Policy{Matrix(), Matrix()};
    }
    trace.final_logits = theta;
    trace.runtime_seconds = seconds_since(start);
    return trace;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string trace_to_csv(const RunTrace& trace) {
    std::ostringstream os;
    os << "k,objective,subopt,grad_norm,critic_mse,policy_min\n";
    for (const auto& r : trace.records)
        os << r.k << ',' << format_double(r.objective) << ',' << format_double(r.subopt) << ','
           << format_double(r.grad_norm) << ',' << format_double(r.critic_mse) << ','
           << format_double(r.policy_min) << '\n';
    return os.str();
}

std::string trace_summary_json(const RunTrace& trace) {
    nlohmann::json j;
    j["config"] = detail::config_json(trace.config);
    j["J_star"] = trace.j_star;
    j["constants"] = detail::constants_json(trace.constants);
    if (!trace.records.empty()) j["final"] = detail::record_json(trace.records.back());
    j["runtime_seconds"] = trace.runtime_seconds;
    j["aborted"] = trace.aborted;
    if (trace.aborted) j["abort_reason"] = trace.abort_reason;
    if (!trace.final_policy.probs.empty()) {
        j["final_policy"] = trace.final_policy.probs.storage();
        j["n_states"] = trace.final_policy.n_states();
        j["n_actions"] = trace.final_policy.n_actions();
    }
    return j.dump(2);
}

}  // namespace entac
