#include "entac/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace entac {

ActorDist actor_dist(const TabularMdp& mdp, const Policy& policy, const Occupancy& occ) {
    ActorDist dist;
    dist.n_states = mdp.n_states;
    dist.n_actions = mdp.n_actions;
    dist.probs.resize(mdp.n_states * mdp.n_actions);
    for (std::size_t s = 0; s < mdp.n_states; ++s)
        for (std::size_t a = 0; a < mdp.n_actions; ++a)
            dist.probs[dist.flat(s, a)] = occ.d[s] * policy.probs(s, a);
    return dist;
}

ActorDist actor_dist(const TabularMdp& mdp, const Logits& theta) {
    Policy pi = softmax_policy(theta);
    Occupancy occ = occupancy(mdp, pi);
    return actor_dist(mdp, pi, occ);
}

CriticDist critic_dist(const TabularMdp& mdp, const Policy& policy, const Occupancy& occ) {
    return CriticDist{actor_dist(mdp, policy, occ), mdp, policy};
}

CriticDist critic_dist(const TabularMdp& mdp, const Logits& theta) {
    Policy pi = softmax_policy(theta);
    Occupancy occ = occupancy(mdp, pi);
    return critic_dist(mdp, pi, occ);
}

std::size_t sample_categorical(const std::vector<double>& probs, Rng& rng) {
    const double u = uniform01(rng);
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        cum += probs[i];
        if (u < cum) return i;
    }
    return probs.size() - 1;
}

namespace {

std::size_t sample_row(const double* row, std::size_t n, Rng& rng) {
    const double u = uniform01(rng);
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        cum += row[i];
        if (u < cum) return i;
    }
    return n - 1;
}

}  // namespace

std::pair<std::size_t, std::size_t> sample_actor(const ActorDist& dist, Rng& rng) {
    return dist.unflat(sample_categorical(dist.probs, rng));
}

CriticSample sample_critic(const CriticDist& dist, Rng& rng) {
    CriticSample x;
    auto [s, a] = sample_actor(dist.first, rng);
    x.s = s;
    x.a = a;
    const std::size_t S = dist.mdp.n_states, A = dist.mdp.n_actions;
    x.s2 = sample_row(dist.mdp.transition.data() + (s * A + a) * S, S, rng);
    x.a2 = sample_row(dist.policy.probs.data() + x.s2 * A, A, rng);
    return x;
}

std::size_t rollout_state_sample(const TabularMdp& mdp, const Policy& policy, Rng& rng) {
    const std::size_t S = mdp.n_states, A = mdp.n_actions;
    std::size_t s = sample_row(mdp.init_dist.data(), S, rng);
    // Emit the state after a geometric(1-gamma) number of steps.
    while (uniform01(rng) < mdp.gamma) {
        std::size_t a = sample_row(policy.probs.data() + s * A, A, rng);
        s = sample_row(mdp.transition.data() + (s * A + a) * S, S, rng);
    }
    return s;
}

SparseUpdate actor_grad_estimate(std::size_t s, std::size_t a, const Matrix& adv_hat,
                                 double gamma) {
    return SparseUpdate{s, a, adv_hat(s, a) / (1.0 - gamma)};
}

SparseUpdate td_update(const CriticSample& x, const Policy& policy, const Matrix& q_hat,
                       double lambda, const TabularMdp& mdp) {
    const double target =
        mdp.reward(x.s, x.a) +
        mdp.gamma * (q_hat(x.s2, x.a2) - lambda * policy.log_probs(x.s2, x.a2));
    return SparseUpdate{x.s, x.a, target - q_hat(x.s, x.a)};
}

Matrix expected_actor_grad(const TabularMdp& mdp, const Logits& theta, const Matrix& adv_hat) {
    ActorDist dist = actor_dist(mdp, theta);
    Matrix mean(mdp.n_states, mdp.n_actions);
    const double scale = 1.0 / (1.0 - mdp.gamma);
    for (std::size_t s = 0; s < mdp.n_states; ++s)
        for (std::size_t a = 0; a < mdp.n_actions; ++a)
            mean(s, a) = dist.probs[dist.flat(s, a)] * scale * adv_hat(s, a);
    return mean;
}

ActorMoments actor_bias_variance(const TabularMdp& mdp, const Logits& theta,
                                 const Matrix& adv_hat, double lambda) {
    Policy pi = softmax_policy(theta);
    Occupancy occ = occupancy(mdp, pi);
    RegValues vals = reg_values(mdp, pi, lambda);
    const double scale_sq = 1.0 / ((1.0 - mdp.gamma) * (1.0 - mdp.gamma));

    KahanSum bias, second, mean_sq;
    for (std::size_t s = 0; s < mdp.n_states; ++s)
        for (std::size_t a = 0; a < mdp.n_actions; ++a) {
            const double w = occ.d[s] * pi.probs(s, a);
            const double ah = adv_hat(s, a);
            const double diff = ah - vals.adv(s, a);
            bias.add(w * w * diff * diff);
            second.add(w * ah * ah);
            mean_sq.add(w * w * ah * ah);
        }

    ActorMoments m;
    m.bias_sq = scale_sq * bias.value();
    m.variance_bound = scale_sq * second.value();
    m.variance = scale_sq * (second.value() - mean_sq.value());
    m.mean_sq_dev = m.variance + m.bias_sq;
    return m;
}

Matrix deterministic_td_operator(const TabularMdp& mdp, const Policy& policy,
                                 const Occupancy& occ, const Matrix& q, double lambda,
                                 double eta_c) {
    if (eta_c < 0.0)
        throw std::invalid_argument("deterministic_td_operator: eta_c must be nonnegative");
    const std::size_t S = mdp.n_states, A = mdp.n_actions;

    // Soft backup value per next state: sum_a~ pi (q - lambda log pi).
    Vector backup(S);
    for (std::size_t s2 = 0; s2 < S; ++s2) {
        KahanSum acc;
        for (std::size_t a2 = 0; a2 < A; ++a2) {
            const double p = policy.probs(s2, a2);
            if (p == 0.0) continue;
            acc.add(p * (q(s2, a2) - lambda * policy.log_probs(s2, a2)));
        }
        backup[s2] = acc.value();
    }

    Matrix out = q;
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a) {
            KahanSum next;
            for (std::size_t s2 = 0; s2 < S; ++s2) next.add(mdp.p(s, a, s2) * backup[s2]);
            const double residual = mdp.reward(s, a) + mdp.gamma * next.value() - q(s, a);
            out(s, a) += eta_c * occ.d[s] * policy.probs(s, a) * residual;
        }
    return out;
}

Matrix deterministic_td_operator(const TabularMdp& mdp, const Logits& theta, const Matrix& q,
                                 double lambda, double eta_c) {
    Policy pi = softmax_policy(theta);
    Occupancy occ = occupancy(mdp, pi);
    return deterministic_td_operator(mdp, pi, occ, q, lambda, eta_c);
}

CriticMoments critic_estimator_second_moment(const TabularMdp& mdp, const Logits& theta,
                                             const Matrix& q, double lambda) {
    Policy pi = softmax_policy(theta);
    Occupancy occ = occupancy(mdp, pi);
    const std::size_t S = mdp.n_states, A = mdp.n_actions;

    KahanSum second, mean_sq;
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a) {
            const double w = occ.d[s] * pi.probs(s, a);
            if (w == 0.0) continue;
            KahanSum cond_mean, cond_sq;
            for (std::size_t s2 = 0; s2 < S; ++s2) {
                const double p_next = mdp.p(s, a, s2);
                if (p_next == 0.0) continue;
                for (std::size_t a2 = 0; a2 < A; ++a2) {
                    const double p_pair = p_next * pi.probs(s2, a2);
                    if (p_pair == 0.0) continue;
                    const double delta =
                        mdp.reward(s, a) +
                        mdp.gamma * (q(s2, a2) - lambda * pi.log_probs(s2, a2)) - q(s, a);
                    cond_mean.add(p_pair * delta);
                    cond_sq.add(p_pair * delta * delta);
                }
            }
            second.add(w * cond_sq.value());
            const double m = w * cond_mean.value();
            mean_sq.add(m * m);
        }

    CriticMoments out;
    out.variance = second.value() - mean_sq.value();
    const double log_a = std::log(static_cast<double>(A));
    out.bound = 8.0 * sup_norm(q) * sup_norm(q) + 4.0 + 4.0 * lambda * lambda +
                4.0 * lambda * lambda * log_a * log_a;
    return out;
}

}  // namespace entac
