#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entac/exact.hpp"
#include "entac/mdp.hpp"
#include "entac/policy.hpp"
#include "entac/rng.hpp"
#include "entac/sampling.hpp"

namespace entac {

enum class CriticMode { Learned, ExactOracle };
enum class TauMode { AutoTauLambda, Fixed, Disabled };

struct TrainConfig {
    double eta_a = 0.1;
    double eta_c = 0.05;
    std::size_t critic_steps = 8;   // TD updates per actor update ("H")
    std::size_t iterations = 1000;  // actor updates ("K")
    double lambda = 0.05;
    TauMode tau_mode = TauMode::AutoTauLambda;
    double fixed_tau = 0.0;
    CriticMode critic_mode = CriticMode::Learned;
    std::uint64_t seed = 0;
    std::size_t eval_every = 10;
    Matrix q_init;  // empty -> zeros

    // Debug switch: replace the sampled actor gradient by the exact full
    // gradient (exact-oracle mode only). Used by the smooth-ascent sanity
    // check, never by experiments.
    bool deterministic_gradient = false;
};

/// Estimated critic state derived from a q table via the value/advantage
/// update equations.
struct CriticState {
    Matrix q_hat;
    Vector v_hat;
    Matrix adv_hat;
};

struct TraceRecord {
    std::size_t k = 0;
    double objective = 0.0;
    double subopt = 0.0;
    double grad_norm = 0.0;
    double critic_mse = 0.0;
    double policy_min = 0.0;
    double wall_seconds = 0.0;  // not serialized to CSV (non-deterministic)
};

struct RunTrace {
    TrainConfig config;
    double j_star = 0.0;
    ConstantsReport constants;
    std::vector<TraceRecord> records;
    Logits final_logits;
    Policy final_policy;
    double runtime_seconds = 0.0;
    bool aborted = false;
    std::string abort_reason;
};

/// v_hat(s) = sum_a pi (q_hat - lambda log pi); adv_hat = q_hat - lambda
/// log pi - v_hat.
CriticState advantage_from_q(const Matrix& q_hat, const Logits& theta, double lambda);
CriticState advantage_from_q(const Matrix& q_hat, const Policy& policy, double lambda);

/// Runs `steps` sequential TD updates with i.i.d. samples from the critic
/// distribution of theta, warm-started at q_start.
Matrix critic_inner_loop(const TabularMdp& mdp, const Logits& theta, const Matrix& q_start,
                         std::size_t steps, double eta_c, double lambda, Rng& rng);

/// One projected actor step at the sampled coordinate.
Logits actor_step(const Logits& theta, std::size_t s, std::size_t a, const CriticState& critic,
                  double eta_a, double gamma, const Tau& tau, Rng& rng);

/// Full training loop; bit-reproducible given the config (including seed).
RunTrace run_ent_ac(const TabularMdp& mdp, const TrainConfig& config);

/// CSV with header k,objective,subopt,grad_norm,critic_mse,policy_min and
/// 17-significant-digit numbers; byte-identical across reruns.
std::string trace_to_csv(const RunTrace& trace);

/// JSON summary {config, J_star, final record, runtime_seconds, ...};
/// includes the final policy as a row-major matrix.
std::string trace_summary_json(const RunTrace& trace);

std::string format_double(double x);  // %.17g

}  // namespace entac
