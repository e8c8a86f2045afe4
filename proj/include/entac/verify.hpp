#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entac/exact.hpp"
#include "entac/mdp.hpp"
#include "entac/policy.hpp"
#include "entac/trainer.hpp"

namespace entac {

/// Graded outcome of one inequality check: slack = claimed bound minus
/// measured quantity; the check passes iff slack >= -tolerance.
struct CheckResult {
    std::string name;
    bool passed = false;
    double slack = 0.0;
    double tolerance = 0.0;
    std::string witness;  // serialized inputs of the worst case

    static CheckResult from_slack(std::string name, double slack, double tolerance,
                                  std::string witness = "{}");
};

/// Central finite differences of the objective, coordinate by coordinate.
/// Independent of the analytic gradient path.
Matrix finite_diff_gradient(const TabularMdp& mdp, const Logits& theta, double lambda, double h);

/// E||g_a - grad||^2 <= ||grad||^2 / ((1-gamma) pi_min rho_min), both
/// sides by exact enumeration with the exact advantage.
CheckResult check_actor_variance_bound(const TabularMdp& mdp, const Logits& theta, double lambda);

/// ||grad||^2 >= mu(theta) (J* - J(theta)). Pass j_star when it is already
/// known to avoid re-solving.
CheckResult check_pl(const TabularMdp& mdp, const Logits& theta, double lambda,
                     double j_star = std::numeric_limits<double>::quiet_NaN());

/// ||q~ - Bq||^2 <= (1 - eta_c (1-gamma)^2 rho_min tau + eta_c^2
/// (1+gamma)^2) ||q~ - q||^2 with tau = min prob of the current policy.
CheckResult check_contraction(const TabularMdp& mdp, const Logits& theta, const Matrix& q,
                              double lambda, double eta_c);

/// <D (I - gamma P~) v, v> >= (1-gamma)^2 rho_min pi_min ||v||^2 / 2.
CheckResult check_monotone_operator(const TabularMdp& mdp, const Logits& theta, const Matrix& v);

/// J(U_{tau_lambda}(pi)) >= J(pi); flagged as skipped when tau_lambda
/// underflows to zero.
CheckResult check_improvement(const TabularMdp& mdp, const Policy& pi, double lambda);

/// Statewise L1 optimality of the projection against n_trials random
/// members of the tau-interior simplex.
CheckResult check_projection_l1(const Policy& pi, double tau, std::size_t n_trials, Rng& rng);

/// One projected actor step; ||q~' - q~||_2 <= C~ eta_a |a(sample)|.
CheckResult check_q_drift(const TabularMdp& mdp, const Logits& theta, const TrainConfig& config,
                          Rng& rng);

/// Pinsker, KL upper bound, KL-logit, p log^2 p, and the Q-value bound on
/// 1e4 random instances each.
std::vector<CheckResult> check_aux_inequalities(std::uint64_t seed);

/// Named batch of checks over shipped default instances; deterministic
/// given the seed. Suites: gradients, variance, contraction, projection,
/// aux, all.
std::vector<CheckResult> run_check_suite(const std::string& suite, std::uint64_t seed);

std::string check_result_json(const CheckResult& r);

}  // namespace entac
