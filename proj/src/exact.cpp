#include "entac/exact.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace entac {

namespace {

double log_sum_exp(const double* x, std::size_t n) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = std::max(m, x[i]);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::exp(x[i] - m);
    return m + std::log(acc);
}

double kl_rows(const Policy& p, const Policy& q, std::size_t s) {
    // 0 log(0/q) = 0 by convention.
    KahanSum kl;
    for (std::size_t a = 0; a < p.n_actions(); ++a) {
        double pa = p.probs(s, a);
        if (pa == 0.0) continue;
        kl.add(pa * (p.log_probs(s, a) - q.log_probs(s, a)));
    }
    return kl.value();
}

}  // namespace

RegValues reg_values(const TabularMdp& mdp, const Policy& policy, double lambda) {
    const std::size_t S = mdp.n_states, A = mdp.n_actions;
    if (policy.n_states() != S || policy.n_actions() != A)
        throw std::invalid_argument("reg_values: policy shape mismatch");

    // (I - gamma P_pi) v = r_pi with r_pi(s) = sum_a pi (r - lambda log pi).
    Matrix lhs(S, S, 0.0);
    Vector rhs(S, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        lhs(s, s) = 1.0;
        KahanSum r_row;
        for (std::size_t a = 0; a < A; ++a) {
            const double pi = policy.probs(s, a);
            if (pi == 0.0) continue;
            r_row.add(pi * (mdp.reward(s, a) - lambda * policy.log_probs(s, a)));
            for (std::size_t s2 = 0; s2 < S; ++s2)
                lhs(s, s2) -= mdp.gamma * pi * mdp.p(s, a, s2);
        }
        rhs[s] = r_row.value();
    }

    Matrix lhs_copy = lhs;
    Vector v = solve_dense(std::move(lhs), rhs);
    if (solve_residual(lhs_copy, v, rhs) > 1e-8)
        throw std::runtime_error("reg_values: linear solve residual above 1e-8");

    RegValues out;
    out.lambda = lambda;
    out.v = std::move(v);
    out.q = Matrix(S, A);
    out.adv = Matrix(S, A);
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a) {
            KahanSum next;
            for (std::size_t s2 = 0; s2 < S; ++s2) next.add(mdp.p(s, a, s2) * out.v[s2]);
            out.q(s, a) = mdp.reward(s, a) + mdp.gamma * next.value();
            out.adv(s, a) = out.q(s, a) - lambda * policy.log_probs(s, a) - out.v[s];
        }
    return out;
}

double reg_objective(const TabularMdp& mdp, const Policy& policy, double lambda) {
    RegValues vals = reg_values(mdp, policy, lambda);
    KahanSum j;
    for (std::size_t s = 0; s < mdp.n_states; ++s) j.add(mdp.init_dist[s] * vals.v[s]);
    return j.value();
}

SoftSolution optimal_reg_values(const TabularMdp& mdp, double lambda, double tol) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("optimal_reg_values: lambda must be positive");
    const std::size_t S = mdp.n_states, A = mdp.n_actions;
    const double threshold = tol * (1.0 - mdp.gamma);
    constexpr std::size_t kMaxIters = 1000000;

    Vector v(S, 0.0);
    Vector scaled(A);
    double change = 0.0;
    std::size_t iter = 0;
    for (; iter < kMaxIters; ++iter) {
        change = 0.0;
        Vector v_next(S);
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t a = 0; a < A; ++a) {
                KahanSum next;
                for (std::size_t s2 = 0; s2 < S; ++s2) next.add(mdp.p(s, a, s2) * v[s2]);
                scaled[a] = (mdp.reward(s, a) + mdp.gamma * next.value()) / lambda;
            }
            v_next[s] = lambda * log_sum_exp(scaled.data(), A);
            change = std::max(change, std::abs(v_next[s] - v[s]));
        }
        v = std::move(v_next);
        if (change <= threshold) break;
    }
    if (iter == kMaxIters) {
        std::ostringstream os;
        os << "optimal_reg_values: no convergence after " << kMaxIters
           << " iterations, last residual " << change;
        throw std::runtime_error(os.str());
    }

    SoftSolution sol;
    sol.iterations = iter + 1;
    sol.residual = change;
    sol.q_star = Matrix(S, A);
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a) {
            KahanSum next;
            for (std::size_t s2 = 0; s2 < S; ++s2) next.add(mdp.p(s, a, s2) * v[s2]);
            sol.q_star(s, a) = mdp.reward(s, a) + mdp.gamma * next.value();
        }

    // One final Bellman image so the consistency pi* = exp((q*-v*)/lambda)
    // holds to roundoff rather than to the iteration tolerance.
    sol.v_star = Vector(S);
    Matrix probs(S, A), log_probs(S, A);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) scaled[a] = sol.q_star(s, a) / lambda;
        sol.v_star[s] = lambda * log_sum_exp(scaled.data(), A);
        for (std::size_t a = 0; a < A; ++a) {
            log_probs(s, a) = (sol.q_star(s, a) - sol.v_star[s]) / lambda;
            probs(s, a) = std::exp(log_probs(s, a));
        }
    }
    sol.pi_star = Policy{std::move(probs), std::move(log_probs)};

    KahanSum j;
    for (std::size_t s = 0; s < S; ++s) j.add(mdp.init_dist[s] * sol.v_star[s]);
    sol.j_star = j.value();
    return sol;
}

Matrix exact_gradient(const TabularMdp& mdp, const Logits& theta, double lambda) {
    Policy pi = softmax_policy(theta);
    Occupancy occ = occupancy(mdp, pi);
    RegValues vals = reg_values(mdp, pi, lambda);

    Matrix grad(mdp.n_states, mdp.n_actions);
    const double scale = 1.0 / (1.0 - mdp.gamma);
    for (std::size_t s = 0; s < mdp.n_states; ++s)
        for (std::size_t a = 0; a < mdp.n_actions; ++a)
            grad(s, a) = scale * occ.d[s] * pi.probs(s, a) * vals.adv(s, a);
    return grad;
}

double pl_coefficient(const TabularMdp& mdp, const Logits& theta, double lambda) {
    const double rho_min = mdp.rho_min();
    if (!(rho_min > 0.0))
        throw std::invalid_argument("pl_coefficient: requires rho_min > 0");
    Policy pi = softmax_policy(theta);
    const double pi_min = pi.min_prob();
    return lambda * (1.0 - mdp.gamma) * rho_min * rho_min * pi_min * pi_min /
           static_cast<double>(mdp.n_states);
}

double smoothness_L(double lambda, double gamma, std::size_t n_actions) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("smoothness_L: gamma must be in [0,1)");
    const double one_minus = 1.0 - gamma;
    return (8.0 + lambda * (4.0 + 8.0 * std::log(static_cast<double>(n_actions)))) /
           (one_minus * one_minus * one_minus);
}

std::pair<double, double> soft_pdl_sides(const TabularMdp& mdp, const Policy& pi1,
                                         const Policy& pi2, double lambda, std::size_t s) {
    RegValues vals1 = reg_values(mdp, pi1, lambda);
    RegValues vals2 = reg_values(mdp, pi2, lambda);
    const double lhs = vals2.v[s] - vals1.v[s];

    Vector e_s(mdp.n_states, 0.0);
    e_s[s] = 1.0;
    Occupancy d = occupancy_from(mdp, pi1, e_s);

    KahanSum rhs;
    for (std::size_t s2 = 0; s2 < mdp.n_states; ++s2) {
        KahanSum inner;
        for (std::size_t a = 0; a < mdp.n_actions; ++a)
            inner.add((pi2.probs(s2, a) - pi1.probs(s2, a)) *
                      (vals2.q(s2, a) - lambda * pi2.log_probs(s2, a)));
        rhs.add(d.d[s2] * (inner.value() + lambda * kl_rows(pi1, pi2, s2)));
    }
    return {lhs, rhs.value() / (1.0 - mdp.gamma)};
}

ConstantsReport constants_report(const TabularMdp& mdp, double lambda, const Tau& tau,
                                 double eta_a, double eta_c, const Matrix& q_init) {
    const double gamma = mdp.gamma;
    const double one_minus = 1.0 - gamma;
    const double rho_min = mdp.rho_min();
    const double log_a = std::log(static_cast<double>(mdp.n_actions));
    const double sa = static_cast<double>(mdp.n_states * mdp.n_actions);
    const double inf = std::numeric_limits<double>::infinity();

    ConstantsReport rep;
    rep.smoothness_L = smoothness_L(lambda, gamma, mdp.n_actions);
    rep.critic_sigma_sq = (36.0 + 4.0 * lambda * lambda +
                           36.0 * lambda * lambda * log_a * log_a) /
                          (one_minus * one_minus);
    rep.tau_positive = tau.enabled();

    if (!rep.tau_positive) {
        rep.pl_floor_mu = 0.0;
        rep.critic_mu = 0.0;
        rep.c_lambda = inf;
        rep.c_tilde_lambda = inf;
        rep.bias_B = inf;
        rep.predicted_H_floor = inf;
        rep.actor_step_cap = 0.0;
        rep.critic_step_cap = 0.0;
        return rep;
    }

    const double t = tau.tau;
    rep.pl_floor_mu =
        lambda * one_minus * rho_min * rho_min * t * t / static_cast<double>(mdp.n_states);
    rep.critic_mu = one_minus * one_minus * rho_min * t / 2.0;
    rep.c_lambda = 2.0 * gamma / one_minus *
                   ((1.0 + lambda * log_a) / one_minus + lambda * std::log(1.0 / t) +
                    lambda / (2.0 * t));
    rep.c_tilde_lambda = std::sqrt(sa) * rep.c_lambda;

    // || q_init - q of the uniform initial policy ||_2^2; theta_0 defaults
    // to zeros, i.e. the uniform policy.
    RegValues init_vals = reg_values(mdp, Policy::uniform(mdp.n_states, mdp.n_actions), lambda);
    KahanSum e0;
    for (std::size_t i = 0; i < init_vals.q.size(); ++i) {
        double qi = q_init.empty() ? 0.0 : q_init.data()[i];
        double diff = qi - init_vals.q.data()[i];
        e0.add(diff * diff);
    }

    const double ct2 = rep.c_tilde_lambda * rep.c_tilde_lambda;
    rep.bias_B = 2.0 * e0.value() +
                 2.0 * ct2 * rho_min * rho_min * t * t *
                     (2.0 + lambda * lambda + 3.0 * lambda * lambda * log_a * log_a) /
                     (rep.smoothness_L * rep.smoothness_L) +
                 2.0 * one_minus * one_minus * rho_min * t * rep.critic_sigma_sq /
                     (20.0 * rep.critic_mu) +
                 2.0 * sa * (1.0 + lambda * lambda * log_a * log_a) / (one_minus * one_minus);

    rep.predicted_H_floor =
        2.0 / (eta_c * rep.critic_mu) * std::log(2.0 + 4.0 * ct2 * eta_a * eta_a);
    rep.actor_step_cap = one_minus * rho_min * t / (8.0 * rep.smoothness_L);
    rep.critic_step_cap = one_minus * one_minus * rho_min * t / 40.0;
    return rep;
}

}  // namespace entac
