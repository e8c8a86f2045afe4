#include "entac/policy.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "entac/mdp.hpp"

namespace entac {

Policy Policy::from_probs(Matrix probs) {
    const std::size_t S = probs.rows(), A = probs.cols();
    Matrix log_probs(S, A);
    for (std::size_t s = 0; s < S; ++s) {
        KahanSum row;
        for (std::size_t a = 0; a < A; ++a) {
            double p = probs(s, a);
            if (p < 0.0) throw std::invalid_argument("Policy::from_probs: negative probability");
            row.add(p);
            log_probs(s, a) = std::log(p);
        }
        if (std::abs(row.value() - 1.0) > 1e-9)
            throw std::invalid_argument("Policy::from_probs: row does not sum to 1");
    }
    return Policy{std::move(probs), std::move(log_probs)};
}

Policy Policy::uniform(std::size_t n_states, std::size_t n_actions) {
    Matrix probs(n_states, n_actions, 1.0 / static_cast<double>(n_actions));
    Matrix log_probs(n_states, n_actions, -std::log(static_cast<double>(n_actions)));
    return Policy{std::move(probs), std::move(log_probs)};
}

Tau Tau::from_value(double tau_value) {
    if (!(tau_value >= 0.0) || !std::isfinite(tau_value))
        throw std::invalid_argument("Tau::from_value: tau must be finite and nonnegative");
    if (tau_value == 0.0) return disabled();
    return Tau{std::log(tau_value), tau_value};
}

Policy softmax_policy(const Logits& theta) {
    const std::size_t S = theta.n_states(), A = theta.n_actions();
    Matrix probs(S, A);
    Matrix log_probs(S, A);
    for (std::size_t s = 0; s < S; ++s) {
        double row_max = theta.theta(s, 0);
        for (std::size_t a = 1; a < A; ++a) row_max = std::max(row_max, theta.theta(s, a));
        if (!std::isfinite(row_max))
            throw std::invalid_argument("softmax_policy: non-finite logits");

        double z = 0.0;
        for (std::size_t a = 0; a < A; ++a) {
            double e = std::exp(theta.theta(s, a) - row_max);
            probs(s, a) = e;
            z += e;
        }
        const double log_z = std::log(z);
        for (std::size_t a = 0; a < A; ++a) {
            probs(s, a) /= z;
            log_probs(s, a) = theta.theta(s, a) - row_max - log_z;
        }
    }
    return Policy{std::move(probs), std::move(log_probs)};
}

Logits logits_from_policy(const Policy& policy) {
    Matrix theta = policy.log_probs;
    for (std::size_t i = 0; i < theta.size(); ++i)
        if (!std::isfinite(theta.data()[i]))
            throw std::invalid_argument("logits_from_policy: zero probability has no finite logit");
    return Logits{std::move(theta)};
}

Tau tau_lambda(double gamma, double lambda, std::size_t n_actions, double rho_min) {
    if (!(rho_min > 0.0)) return Tau::disabled();
    if (!(lambda > 0.0)) throw std::invalid_argument("tau_lambda: lambda must be positive");

    const double log_a = std::log(static_cast<double>(n_actions));
    const double first =
        -std::log(3.0) - (16.0 + 8.0 * gamma * lambda * log_a) /
                             (lambda * (1.0 - gamma) * (1.0 - gamma) * rho_min);
    const double second = -8.0 * std::log(3.0) - 4.0 * log_a;
    const double log_tau = std::min(first, second);
    // exp may underflow to 0; callers treat that as "projection disabled"
    // while keeping the finite log_tau for reporting.
    return Tau{log_tau, std::exp(log_tau)};
}

Tau tau_lambda(const TabularMdp& mdp, double lambda) {
    return tau_lambda(mdp.gamma, lambda, mdp.n_actions, mdp.rho_min());
}

namespace {

// Applies the threshold operator to one row in place. Returns true when the
// row changed. rows with an empty low set are left bitwise untouched and
// consume no randomness.
bool project_row(double* probs, std::size_t n_actions, double tau, Rng& rng) {
    double added = 0.0;
    bool any = false;
    for (std::size_t a = 0; a < n_actions; ++a) {
        if (probs[a] <= tau) {
            added += tau - probs[a];
            any = true;
        }
    }
    if (!any) return false;

    double best = probs[0];
    for (std::size_t a = 1; a < n_actions; ++a) best = std::max(best, probs[a]);
    std::vector<std::size_t> arg;
    for (std::size_t a = 0; a < n_actions; ++a)
        if (probs[a] == best) arg.push_back(a);
    const std::size_t pick = arg.size() == 1 ? arg[0] : arg[uniform_index(rng, arg.size())];

    for (std::size_t a = 0; a < n_actions; ++a)
        if (probs[a] <= tau) probs[a] = tau;
    probs[pick] -= added;
    return true;
}

}  // namespace

Policy project_policy(const Policy& policy, const Tau& tau, Rng& rng) {
    if (!tau.enabled()) return policy;
    const std::size_t A = policy.n_actions();
    if (!(tau.tau < 1.0 / (2.0 * static_cast<double>(A * A))))
        throw std::invalid_argument("project_policy: tau must be below 1/(2|A|^2)");

    Matrix probs = policy.probs;
    Matrix log_probs = policy.log_probs;
    for (std::size_t s = 0; s < policy.n_states(); ++s) {
        double* row = probs.data() + s * A;
        if (project_row(row, A, tau.tau, rng))
            for (std::size_t a = 0; a < A; ++a) log_probs(s, a) = std::log(row[a]);
    }
    return Policy{std::move(probs), std::move(log_probs)};
}

Logits project_logits(const Logits& theta, const Tau& tau, Rng& rng) {
    if (!tau.enabled()) return theta;
    const std::size_t A = theta.n_actions();
    if (!(tau.tau < 1.0 / (2.0 * static_cast<double>(A * A))))
        throw std::invalid_argument("project_logits: tau must be below 1/(2|A|^2)");

    Policy pi = softmax_policy(theta);
    Logits out = theta;
    for (std::size_t s = 0; s < theta.n_states(); ++s) {
        double* row = pi.probs.data() + s * A;
        if (project_row(row, A, tau.tau, rng))
            for (std::size_t a = 0; a < A; ++a) out.theta(s, a) = std::log(row[a]);
    }
    return out;
}

}  // namespace entac
