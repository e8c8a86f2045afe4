#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "entac/exact.hpp"
#include "entac/harness.hpp"
#include "entac/mdp.hpp"
#include "entac/policy.hpp"
#include "entac/sampling.hpp"
#include "entac/trainer.hpp"
#include "entac/verify.hpp"
#include "json.hpp"

namespace py = pybind11;
using namespace entac;

namespace {

py::array_t<double> to_np(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    std::copy(m.data(), m.data() + m.size(), out.mutable_data());
    return out;
}

py::array_t<double> to_np(const Vector& v) {
    py::array_t<double> out(v.size());
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + m.size(), m.data());
    return m;
}

Policy to_policy(const py::array_t<double, py::array::c_style | py::array::forcecast>& probs) {
    return Policy::from_probs(to_matrix(probs));
}

Logits to_logits(const py::array_t<double, py::array::c_style | py::array::forcecast>& theta) {
    return Logits{to_matrix(theta)};
}

py::dict constants_dict(const ConstantsReport& r) {
    py::dict d;
    d["smoothness_L"] = r.smoothness_L;
    d["pl_floor_mu"] = r.pl_floor_mu;
    d["critic_mu"] = r.critic_mu;
    d["critic_sigma_sq"] = r.critic_sigma_sq;
    d["c_lambda"] = r.c_lambda;
    d["c_tilde_lambda"] = r.c_tilde_lambda;
    d["bias_B"] = r.bias_B;
    d["predicted_H_floor"] = r.predicted_H_floor;
    d["actor_step_cap"] = r.actor_step_cap;
    d["critic_step_cap"] = r.critic_step_cap;
    d["tau_positive"] = r.tau_positive;
    return d;
}

TrainConfig config_from_dict(const py::dict& config) {
    nlohmann::json doc = nlohmann::json::parse(std::string(py::str(py::module_::import("json")
                                                                       .attr("dumps")(config))));
    ParsedConfig parsed = parse_config(doc.dump());
    if (parsed.is_sweep()) throw std::invalid_argument("config describes a sweep, not a run");
    return std::get<TrainConfig>(parsed.value);
}

}  // namespace

PYBIND11_MODULE(_entac, m) {
    m.doc() = "Tabular entropy-regularized actor-critic laboratory";

    py::class_<TabularMdp>(m, "TabularMdp")
        .def_readonly("n_states", &TabularMdp::n_states)
        .def_readonly("n_actions", &TabularMdp::n_actions)
        .def_readonly("gamma", &TabularMdp::gamma)
        .def_property_readonly("transition",
                               [](const TabularMdp& mdp) {
                                   py::array_t<double> out(
                                       {mdp.n_states, mdp.n_actions, mdp.n_states});
                                   std::copy(mdp.transition.begin(), mdp.transition.end(),
                                             out.mutable_data());
                                   return out;
                               })
        .def_property_readonly("reward", [](const TabularMdp& mdp) { return to_np(mdp.reward); })
        .def_property_readonly("init_dist",
                               [](const TabularMdp& mdp) { return to_np(mdp.init_dist); })
        .def("rho_min", &TabularMdp::rho_min)
        .def("to_json", &mdp_to_json)
        .def_static("from_json", &mdp_from_json);

    m.def("make_gridworld",
          [](std::size_t rows, std::size_t cols, double gamma, const std::string& init) {
              GridInit mode;
              if (init == "start-cell")
                  mode = GridInit::StartCell;
              else if (init == "uniform")
                  mode = GridInit::Uniform;
              else
                  throw std::invalid_argument("init must be 'start-cell' or 'uniform'");
              return make_gridworld(rows, cols, gamma, mode);
          },
          py::arg("rows"), py::arg("cols"), py::arg("gamma"), py::arg("init") = "start-cell");
    m.def("make_synthetic", &make_synthetic, py::arg("n_states"), py::arg("n_actions"),
          py::arg("gamma"), py::arg("seed"));
    m.def("validate", &validate);

    m.def("occupancy",
          [](const TabularMdp& mdp, const py::array_t<double>& probs) {
              return to_np(occupancy(mdp, to_policy(probs)).d);
          },
          py::arg("mdp"), py::arg("policy_probs"));
    m.def("occupancy_distance_bound",
          [](const TabularMdp& mdp, const py::array_t<double>& p1,
             const py::array_t<double>& p2) {
              return occupancy_distance_bound(mdp, to_policy(p1), to_policy(p2));
          });

    m.def("softmax_policy", [](const py::array_t<double>& theta) {
        Policy pi = softmax_policy(to_logits(theta));
        return py::make_tuple(to_np(pi.probs), to_np(pi.log_probs));
    });
    m.def("logits_from_policy", [](const py::array_t<double>& probs) {
        return to_np(logits_from_policy(to_policy(probs)).theta);
    });
    m.def("tau_lambda", [](const TabularMdp& mdp, double lambda) {
        Tau t = tau_lambda(mdp, lambda);
        py::dict d;
        d["log_tau"] = t.log_tau;
        d["tau"] = t.tau;
        d["enabled"] = t.enabled();
        return d;
    });
    m.def("project_policy",
          [](const py::array_t<double>& probs, double tau, std::uint64_t seed) {
              Rng rng(seed);
              return to_np(project_policy(to_policy(probs), Tau::from_value(tau), rng).probs);
          },
          py::arg("policy_probs"), py::arg("tau"), py::arg("seed") = 0);

    m.def("reg_values", [](const TabularMdp& mdp, const py::array_t<double>& probs,
                           double lambda) {
        RegValues vals = reg_values(mdp, to_policy(probs), lambda);
        py::dict d;
        d["v"] = to_np(vals.v);
        d["q"] = to_np(vals.q);
        d["adv"] = to_np(vals.adv);
        return d;
    });
    m.def("reg_objective", [](const TabularMdp& mdp, const py::array_t<double>& probs,
                              double lambda) { return reg_objective(mdp, to_policy(probs), lambda); });
    m.def("optimal_reg_values",
          [](const TabularMdp& mdp, double lambda, double tol) {
              SoftSolution sol = optimal_reg_values(mdp, lambda, tol);
              py::dict d;
              d["j_star"] = sol.j_star;
              d["v_star"] = to_np(sol.v_star);
              d["q_star"] = to_np(sol.q_star);
              d["pi_star"] = to_np(sol.pi_star.probs);
              d["iterations"] = sol.iterations;
              d["residual"] = sol.residual;
              return d;
          },
          py::arg("mdp"), py::arg("lam"), py::arg("tol") = 1e-12);
    m.def("exact_gradient", [](const TabularMdp& mdp, const py::array_t<double>& theta,
                               double lambda) { return to_np(exact_gradient(mdp, to_logits(theta), lambda)); });
    m.def("finite_diff_gradient",
          [](const TabularMdp& mdp, const py::array_t<double>& theta, double lambda, double h) {
              return to_np(finite_diff_gradient(mdp, to_logits(theta), lambda, h));
          },
          py::arg("mdp"), py::arg("theta"), py::arg("lam"), py::arg("h") = 1e-5);
    m.def("pl_coefficient", [](const TabularMdp& mdp, const py::array_t<double>& theta,
                               double lambda) { return pl_coefficient(mdp, to_logits(theta), lambda); });
    m.def("smoothness_L", &smoothness_L, py::arg("lam"), py::arg("gamma"), py::arg("n_actions"));
    m.def("soft_pdl_sides", [](const TabularMdp& mdp, const py::array_t<double>& p1,
                               const py::array_t<double>& p2, double lambda, std::size_t s) {
        return soft_pdl_sides(mdp, to_policy(p1), to_policy(p2), lambda, s);
    });
    m.def("constants_report",
          [](const TabularMdp& mdp, double lambda, double tau, double eta_a, double eta_c) {
              return constants_dict(constants_report(
                  mdp, lambda, tau > 0.0 ? Tau::from_value(tau) : Tau::disabled(), eta_a, eta_c,
                  Matrix()));
          },
          py::arg("mdp"), py::arg("lam"), py::arg("tau"), py::arg("eta_a"), py::arg("eta_c"));

    m.def("expected_actor_grad",
          [](const TabularMdp& mdp, const py::array_t<double>& theta,
             const py::array_t<double>& adv) {
              return to_np(expected_actor_grad(mdp, to_logits(theta), to_matrix(adv)));
          });
    m.def("actor_bias_variance",
          [](const TabularMdp& mdp, const py::array_t<double>& theta,
             const py::array_t<double>& adv, double lambda) {
              ActorMoments mo = actor_bias_variance(mdp, to_logits(theta), to_matrix(adv), lambda);
              py::dict d;
              d["bias_sq"] = mo.bias_sq;
              d["variance"] = mo.variance;
              d["variance_bound"] = mo.variance_bound;
              d["mean_sq_dev"] = mo.mean_sq_dev;
              return d;
          });
    m.def("deterministic_td_operator",
          [](const TabularMdp& mdp, const py::array_t<double>& theta,
             const py::array_t<double>& q, double lambda, double eta_c) {
              return to_np(deterministic_td_operator(mdp, to_logits(theta), to_matrix(q), lambda,
                                                     eta_c));
          });
    m.def("critic_estimator_second_moment",
          [](const TabularMdp& mdp, const py::array_t<double>& theta,
             const py::array_t<double>& q, double lambda) {
              CriticMoments mo =
                  critic_estimator_second_moment(mdp, to_logits(theta), to_matrix(q), lambda);
              return py::make_tuple(mo.variance, mo.bound);
          });

    m.def("run_ent_ac", [](const TabularMdp& mdp, const py::dict& config) {
        RunTrace trace = run_ent_ac(mdp, config_from_dict(config));
        py::dict d;
        d["j_star"] = trace.j_star;
        d["aborted"] = trace.aborted;
        d["csv"] = trace_to_csv(trace);
        d["summary_json"] = trace_summary_json(trace);
        d["constants"] = constants_dict(trace.constants);
        if (!trace.final_policy.probs.empty()) d["final_policy"] = to_np(trace.final_policy.probs);
        py::list ks, objectives, subopts, grad_norms, critic_mses, policy_mins;
        for (const auto& r : trace.records) {
            ks.append(r.k);
            objectives.append(r.objective);
            subopts.append(r.subopt);
            grad_norms.append(r.grad_norm);
            critic_mses.append(r.critic_mse);
            policy_mins.append(r.policy_min);
        }
        d["k"] = ks;
        d["objective"] = objectives;
        d["subopt"] = subopts;
        d["grad_norm"] = grad_norms;
        d["critic_mse"] = critic_mses;
        d["policy_min"] = policy_mins;
        return d;
    });

    m.def("check_suite",
          [](const std::string& suite, std::uint64_t seed) {
              py::list out;
              for (const CheckResult& r : run_check_suite(suite, seed)) {
                  py::dict d;
                  d["name"] = r.name;
                  d["passed"] = r.passed;
                  d["slack"] = r.slack;
                  d["tolerance"] = r.tolerance;
                  d["witness"] = r.witness;
                  out.append(d);
              }
              return out;
          },
          py::arg("suite") = "all", py::arg("seed") = 0);
}
