#pragma once

// Shared JSON helpers for trainer/harness serialization. Internal to src/.

#include <string>

#include "entac/exact.hpp"
#include "entac/trainer.hpp"
#include "json.hpp"

namespace entac::detail {

inline const char* tau_mode_name(TauMode m) {
    switch (m) {
        case TauMode::AutoTauLambda: return "auto-tau-lambda";
        case TauMode::Fixed: return "fixed";
        case TauMode::Disabled: return "disabled";
    }
    return "auto-tau-lambda";
}

inline const char* critic_mode_name(CriticMode m) {
    return m == CriticMode::Learned ? "learned" : "exact-oracle";
}

// Infinities are not representable in JSON; they serialize as strings.
inline nlohmann::json json_number(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

inline nlohmann::json config_json(const TrainConfig& c) {
    nlohmann::json j;
    j["eta_a"] = c.eta_a;
    j["eta_c"] = c.eta_c;
    j["H"] = c.critic_steps;
    j["K"] = c.iterations;
    j["lambda"] = c.lambda;
    j["tau_mode"] = tau_mode_name(c.tau_mode);
    if (c.tau_mode == TauMode::Fixed) j["tau"] = c.fixed_tau;
    j["critic_mode"] = critic_mode_name(c.critic_mode);
    j["seed"] = c.seed;
    j["eval_every"] = c.eval_every;
    j["q_init"] = c.q_init.empty() ? nlohmann::json("zeros")
                                   : nlohmann::json(c.q_init.storage());
    if (c.deterministic_gradient) j["deterministic_gradient"] = true;
    return j;
}

inline nlohmann::json constants_json(const ConstantsReport& r) {
    nlohmann::json j;
    j["smoothness_L"] = json_number(r.smoothness_L);
    j["pl_floor_mu"] = json_number(r.pl_floor_mu);
    j["critic_mu"] = json_number(r.critic_mu);
    j["critic_sigma_sq"] = json_number(r.critic_sigma_sq);
    j["c_lambda"] = json_number(r.c_lambda);
    j["c_tilde_lambda"] = json_number(r.c_tilde_lambda);
    j["bias_B"] = json_number(r.bias_B);
    j["predicted_H_floor"] = json_number(r.predicted_H_floor);
    j["actor_step_cap"] = json_number(r.actor_step_cap);
    j["critic_step_cap"] = json_number(r.critic_step_cap);
    j["tau_positive"] = r.tau_positive;
    return j;
}

inline nlohmann::json record_json(const TraceRecord& r) {
    nlohmann::json j;
    j["k"] = r.k;
    j["objective"] = r.objective;
    j["subopt"] = r.subopt;
    j["grad_norm"] = r.grad_norm;
    j["critic_mse"] = r.critic_mse;
    j["policy_min"] = r.policy_min;
    return j;
}

}  // namespace entac::detail
