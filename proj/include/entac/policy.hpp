#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "entac/linalg.hpp"
#include "entac/rng.hpp"

namespace entac {

struct TabularMdp;

/// Actor parameters, one logit per (state, action).
struct Logits {
    Matrix theta;

    std::size_t n_states() const { return theta.rows(); }
    std::size_t n_actions() const { return theta.cols(); }

    static Logits zeros(std::size_t n_states, std::size_t n_actions) {
        return Logits{Matrix::zeros(n_states, n_actions)};
    }
};

/// Row-stochastic policy together with numerically stable log
/// probabilities. log_probs is the source of truth wherever log(pi) enters
/// a formula; probs may underflow to 0 for extreme logits while log_probs
/// stays finite.
struct Policy {
    Matrix probs;
    Matrix log_probs;

    std::size_t n_states() const { return probs.rows(); }
    std::size_t n_actions() const { return probs.cols(); }

    double min_prob() const {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < probs.size(); ++i) m = std::min(m, probs.data()[i]);
        return m;
    }

    /// Builds a policy from explicit probabilities (rows must be
    /// distributions); log_probs = log(probs), -inf on zero entries.
    static Policy from_probs(Matrix probs);

    static Policy uniform(std::size_t n_states, std::size_t n_actions);
};

/// Projection threshold. tau == 0 means the projection is disabled, either
/// because rho_min = 0 (sentinel log_tau = -inf) or because tau_lambda
/// underflowed below the smallest positive double (log_tau finite).
struct Tau {
    double log_tau = -std::numeric_limits<double>::infinity();
    double tau = 0.0;

    bool enabled() const { return tau > 0.0; }

    static Tau disabled() { return Tau{}; }
    static Tau from_value(double tau_value);
};

Policy softmax_policy(const Logits& theta);

/// theta(s,a) = log pi(a|s); rejects policies with zero entries.
Logits logits_from_policy(const Policy& policy);

/// Improvement threshold tau_lambda = min((1/3) exp(-(16 + 8 gamma lambda
/// log|A|) / (lambda (1-gamma)^2 rho_min)), 1/(3^8 |A|^4)), evaluated in
/// log space. rho_min = 0 yields the disabled sentinel.
Tau tau_lambda(double gamma, double lambda, std::size_t n_actions, double rho_min);
Tau tau_lambda(const TabularMdp& mdp, double lambda);

/// Statewise mass redistribution: every action with pi(a|s) <= tau is
/// raised to exactly tau and the added mass is removed from the argmax
/// action (ties broken uniformly at random via rng). Requires
/// tau < 1/(2 |A|^2).
Policy project_policy(const Policy& policy, const Tau& tau, Rng& rng);

/// Logit-space projection. Rows the policy projection leaves untouched
/// keep their logits bitwise; changed rows are re-logged from the
/// projected probabilities.
Logits project_logits(const Logits& theta, const Tau& tau, Rng& rng);

}  // namespace entac
