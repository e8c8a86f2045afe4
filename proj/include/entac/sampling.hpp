#pragma once

#include <cstddef>
#include <vector>

#include "entac/exact.hpp"
#include "entac/mdp.hpp"
#include "entac/policy.hpp"
#include "entac/rng.hpp"

namespace entac {

/// Exact categorical distribution over (s, a) pairs with
/// probs[s*A + a] = d(s) pi(a|s).
struct ActorDist {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    std::vector<double> probs;  // flattened (s, a)

    std::size_t flat(std::size_t s, std::size_t a) const { return s * n_actions + a; }
    std::pair<std::size_t, std::size_t> unflat(std::size_t i) const {
        return {i / n_actions, i % n_actions};
    }
};

/// Factored representation of the critic sampling distribution
/// d(s) pi(a|s) P(s~|s,a) pi(a~|s~); the dense joint over (S A)^2 tuples is
/// never materialized.
struct CriticDist {
    ActorDist first;     // marginal over the leading (s, a)
    TabularMdp mdp;      // snapshot (transition kernel drives s~)
    Policy policy;       // snapshot (drives a~)
};

struct CriticSample {
    std::size_t s = 0, a = 0, s2 = 0, a2 = 0;
};

/// Single-coordinate update, the only shape either stochastic gradient
/// takes.
struct SparseUpdate {
    std::size_t s = 0, a = 0;
    double value = 0.0;
};

struct ActorMoments {
    double bias_sq = 0.0;        // ||E g - grad||^2, exact
    double variance = 0.0;       // E ||g - E g||^2, exact
    double variance_bound = 0.0; // sum d pi a^2 / (1-gamma)^2
    double mean_sq_dev = 0.0;    // E ||g - grad||^2 = variance + bias_sq
};

struct CriticMoments {
    double variance = 0.0;  // E ||g_c - E g_c||^2, exact
    double bound = 0.0;     // 8 ||q||_inf^2 + 4 + 4 l^2 + 4 l^2 log^2|A|
};

ActorDist actor_dist(const TabularMdp& mdp, const Logits& theta);
ActorDist actor_dist(const TabularMdp& mdp, const Policy& policy, const Occupancy& occ);

CriticDist critic_dist(const TabularMdp& mdp, const Logits& theta);
CriticDist critic_dist(const TabularMdp& mdp, const Policy& policy, const Occupancy& occ);

/// Inverse-CDF draw over a fixed index order; deterministic given the rng
/// state.
std::size_t sample_categorical(const std::vector<double>& probs, Rng& rng);

std::pair<std::size_t, std::size_t> sample_actor(const ActorDist& dist, Rng& rng);
CriticSample sample_critic(const CriticDist& dist, Rng& rng);

/// Draws a state from the occupancy measure by rolling the chain for a
/// geometric(1-gamma) horizon; cross-validates the linear-solve sampler.
std::size_t rollout_state_sample(const TabularMdp& mdp, const Policy& policy, Rng& rng);

/// adv_hat(s,a) / (1-gamma) at the sampled coordinate.
SparseUpdate actor_grad_estimate(std::size_t s, std::size_t a, const Matrix& adv_hat,
                                 double gamma);

/// TD error r(s,a) + gamma (q(s~,a~) - lambda log pi(a~|s~)) - q(s,a),
/// carried on coordinate (s,a). log pi comes from the policy's stable
/// log_probs.
SparseUpdate td_update(const CriticSample& x, const Policy& policy, const Matrix& q_hat,
                       double lambda, const TabularMdp& mdp);

/// Mean of the actor estimator by full enumeration (no sampling).
Matrix expected_actor_grad(const TabularMdp& mdp, const Logits& theta, const Matrix& adv_hat);

/// Exact bias and variance of the actor estimator for a given advantage
/// table, enumerated over the full support.
ActorMoments actor_bias_variance(const TabularMdp& mdp, const Logits& theta,
                                 const Matrix& adv_hat, double lambda);

/// Deterministic regularized TD operator
/// q + eta_c D_theta [r + gamma P~_theta (q - lambda log pi) - q]; the
/// exact regularized q is its fixed point.
Matrix deterministic_td_operator(const TabularMdp& mdp, const Logits& theta, const Matrix& q,
                                 double lambda, double eta_c);
Matrix deterministic_td_operator(const TabularMdp& mdp, const Policy& policy,
                                 const Occupancy& occ, const Matrix& q, double lambda,
                                 double eta_c);

/// Exact variance of the critic estimator about its mean, with the
/// matching closed-form bound.
CriticMoments critic_estimator_second_moment(const TabularMdp& mdp, const Logits& theta,
                                             const Matrix& q, double lambda);

}  // namespace entac
