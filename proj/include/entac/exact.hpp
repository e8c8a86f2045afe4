#pragma once

#include <cstddef>
#include <utility>

#include "entac/mdp.hpp"
#include "entac/policy.hpp"

namespace entac {

/// Exact regularized values of a (policy, lambda) pair, from a direct
/// linear solve.
struct RegValues {
    Vector v;     // state values
    Matrix q;     // state-action values
    Matrix adv;   // regularized advantage, policy-mean zero per state
    double lambda = 0.0;
};

/// Output of soft value iteration.
struct SoftSolution {
    Vector v_star;
    Matrix q_star;
    Policy pi_star;
    double j_star = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;
};

/// Closed-form constants from the analysis, evaluated for logging. All
/// fields are report-only; nothing in the trainer enforces them.
struct ConstantsReport {
    double smoothness_L = 0.0;
    double pl_floor_mu = 0.0;       // PL coefficient floor at min prob = tau
    double critic_mu = 0.0;         // (1-gamma)^2 rho_min tau / 2
    double critic_sigma_sq = 0.0;   // (36 + 4 l^2 + 36 l^2 log^2|A|)/(1-gamma)^2
    double c_lambda = 0.0;          // sup-norm drift coefficient
    double c_tilde_lambda = 0.0;    // sqrt(|S||A|) * c_lambda
    double bias_B = 0.0;
    double predicted_H_floor = 0.0; // critic steps per actor step for the given step sizes
    double actor_step_cap = 0.0;    // (1-gamma) rho_min tau / (8 L)
    double critic_step_cap = 0.0;   // (1-gamma)^2 rho_min tau / 40
    bool tau_positive = false;      // tau-dependent fields are degenerate when false
};

/// Policy evaluation: v solves (I - gamma P_pi) v = r_pi - lambda * entropy
/// term, then q and the advantage follow from their definitions.
/// lambda = 0 is allowed (plain policy evaluation).
RegValues reg_values(const TabularMdp& mdp, const Policy& policy, double lambda);

/// rho-weighted regularized value of the policy.
double reg_objective(const TabularMdp& mdp, const Policy& policy, double lambda);

/// Soft value iteration V <- lambda * logsumexp((r + gamma P V)/lambda),
/// run until the sup-norm change drops below tol*(1-gamma). Requires
/// lambda > 0.
SoftSolution optimal_reg_values(const TabularMdp& mdp, double lambda, double tol = 1e-12);

/// d(s) pi(a|s) adv(s,a) / (1-gamma), assembled from exact quantities.
Matrix exact_gradient(const TabularMdp& mdp, const Logits& theta, double lambda);

/// Nonuniform Lojasiewicz coefficient lambda (1-gamma) rho_min^2
/// min_{s,a} pi^2 / |S|. Requires rho_min > 0.
double pl_coefficient(const TabularMdp& mdp, const Logits& theta, double lambda);

/// Smoothness constant (8 + lambda (4 + 8 log|A|)) / (1-gamma)^3.
double smoothness_L(double lambda, double gamma, std::size_t n_actions);

/// Both sides of the soft performance-difference identity evaluated at
/// state s; they agree to linear-solve precision.
std::pair<double, double> soft_pdl_sides(const TabularMdp& mdp, const Policy& pi1,
                                         const Policy& pi2, double lambda, std::size_t s);

ConstantsReport constants_report(const TabularMdp& mdp, double lambda, const Tau& tau,
                                 double eta_a, double eta_c, const Matrix& q_init);

}  // namespace entac
