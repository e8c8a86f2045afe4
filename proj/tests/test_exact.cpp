#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "entac/exact.hpp"
#include "entac/rng.hpp"
#include "entac/sampling.hpp"

using namespace entac;

namespace {

TabularMdp one_state_one_action(double reward, double gamma) {
    TabularMdp mdp;
    mdp.n_states = 1;
    mdp.n_actions = 1;
    mdp.gamma = gamma;
    mdp.transition = {1.0};
    mdp.reward = Matrix(1, 1, reward);
    mdp.init_dist = {1.0};
    return mdp;
}

TabularMdp one_state_two_actions(double r0, double r1, double gamma) {
    TabularMdp mdp;
    mdp.n_states = 1;
    mdp.n_actions = 2;
    mdp.gamma = gamma;
    mdp.transition = {1.0, 1.0};
    mdp.reward = Matrix(1, 2);
    mdp.reward(0, 0) = r0;
    mdp.reward(0, 1) = r1;
    mdp.init_dist = {1.0};
    return mdp;
}

Logits random_logits(std::size_t s, std::size_t a, double range, Rng& rng) {
    Logits theta = Logits::zeros(s, a);
    for (std::size_t i = 0; i < theta.theta.size(); ++i)
        theta.theta.data()[i] = uniform_range(rng, -range, range);
    return theta;
}

// Monte-Carlo rollout oracle for the unregularized objective.
double rollout_objective(const TabularMdp& mdp, const Policy& pi, std::size_t horizon,
                         std::size_t n_rollouts, Rng& rng, double* standard_error) {
    KahanSum sum, sum_sq;
    for (std::size_t i = 0; i < n_rollouts; ++i) {
        std::size_t s = sample_categorical(mdp.init_dist, rng);
        double ret = 0.0, discount = 1.0;
        for (std::size_t t = 0; t < horizon; ++t) {
            std::vector<double> row(mdp.n_actions);
            for (std::size_t a = 0; a < mdp.n_actions; ++a) row[a] = pi.probs(s, a);
            const std::size_t a = sample_categorical(row, rng);
            ret += discount * mdp.reward(s, a);
            discount *= mdp.gamma;
            std::vector<double> next(mdp.n_states);
            for (std::size_t s2 = 0; s2 < mdp.n_states; ++s2) next[s2] = mdp.p(s, a, s2);
            s = sample_categorical(next, rng);
        }
        sum.add(ret);
        sum_sq.add(ret * ret);
    }
    const double mean = sum.value() / static_cast<double>(n_rollouts);
    const double var =
        (sum_sq.value() / static_cast<double>(n_rollouts) - mean * mean) /
        static_cast<double>(n_rollouts - 1);
    *standard_error = std::sqrt(std::max(0.0, var));
    return mean;
}

}  // namespace

TEST_SUITE("exact") {

TEST_CASE("single action kills the entropy term") {
    TabularMdp mdp = one_state_one_action(1.0, 0.9);
    RegValues vals = reg_values(mdp, Policy::uniform(1, 1), 3.0);
    CHECK(vals.v[0] == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(vals.q(0, 0) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(std::abs(vals.adv(0, 0)) <= 1e-10);
}

TEST_CASE("pure entropy value has the closed form") {
    TabularMdp mdp = one_state_two_actions(0.0, 0.0, 0.5);
    RegValues vals = reg_values(mdp, Policy::uniform(1, 2), 1.0);
    CHECK(vals.v[0] == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(vals.q(0, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(std::abs(vals.adv(0, 0)) <= 1e-10);
    CHECK(std::abs(vals.adv(0, 1)) <= 1e-10);
}

TEST_CASE("regularized values satisfy their defining identities") {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        TabularMdp mdp = make_synthetic(4, 3, 0.9, rng());
        Policy pi = softmax_policy(random_logits(4, 3, 3.0, rng));
        const double lambda = uniform_range(rng, 0.0, 1.0);
        RegValues vals = reg_values(mdp, pi, lambda);

        for (std::size_t s = 0; s < 4; ++s) {
            KahanSum bellman, mean_adv;
            for (std::size_t a = 0; a < 3; ++a) {
                bellman.add(pi.probs(s, a) * (vals.q(s, a) - lambda * pi.log_probs(s, a)));
                mean_adv.add(pi.probs(s, a) * vals.adv(s, a));
                KahanSum next;
                for (std::size_t s2 = 0; s2 < 4; ++s2) next.add(mdp.p(s, a, s2) * vals.v[s2]);
                CHECK(std::abs(vals.q(s, a) - mdp.reward(s, a) - mdp.gamma * next.value()) <=
                      1e-10);
            }
            CHECK(std::abs(bellman.value() - vals.v[s]) <= 1e-10);
            CHECK(std::abs(mean_adv.value()) <= 1e-10);
        }
        CHECK(sup_norm(vals.q) <=
              (1.0 + lambda * std::log(3.0)) / (1.0 - mdp.gamma) + 1e-9);
    }
}

TEST_CASE("objective of a single state is its value") {
    TabularMdp mdp = one_state_two_actions(0.0, 0.0, 0.5);
    RegValues vals = reg_values(mdp, Policy::uniform(1, 2), 1.0);
    CHECK(reg_objective(mdp, Policy::uniform(1, 2), 1.0) ==
          doctest::Approx(vals.v[0]).epsilon(1e-14));
}

TEST_CASE("objective over identical decoupled states equals either value") {
    TabularMdp mdp;
    mdp.n_states = 2;
    mdp.n_actions = 1;
    mdp.gamma = 0.8;
    mdp.transition = {1.0, 0.0, 0.0, 1.0};  // two self-loops
    mdp.reward = Matrix(2, 1, 0.7);
    mdp.init_dist = {0.5, 0.5};
    RegValues vals = reg_values(mdp, Policy::uniform(2, 1), 0.3);
    CHECK(reg_objective(mdp, Policy::uniform(2, 1), 0.3) ==
          doctest::Approx(vals.v[0]).epsilon(1e-12));
}

TEST_CASE("lambda zero reduces to the plain objective, cross-checked by rollouts") {
    Rng rng(14);
    TabularMdp mdp = make_synthetic(2, 2, 0.9, 14);
    Policy pi = softmax_policy(random_logits(2, 2, 1.0, rng));
    const double exact = reg_objective(mdp, pi, 0.0);
    double se = 0.0;
    const double mc = rollout_objective(mdp, pi, 200, 20000, rng, &se);
    CHECK(std::abs(exact - mc) <= 3.0 * se + 1e-6);
}

TEST_CASE("soft value iteration matches the closed form at gamma zero") {
    // gamma = 0 never enters the transition backup, so use a tiny gamma and
    // compare against the gamma = 0 closed form at matching precision.
    TabularMdp mdp = one_state_two_actions(1.0, 0.0, 1e-12);
    SoftSolution sol = optimal_reg_values(mdp, 1.0);
    CHECK(sol.v_star[0] == doctest::Approx(std::log(std::exp(1.0) + 1.0)).epsilon(1e-9));
    CHECK(sol.pi_star.probs(0, 0) == doctest::Approx(0.731058578).epsilon(1e-6));
    CHECK(sol.pi_star.probs(0, 1) == doctest::Approx(0.268941421).epsilon(1e-6));
    CHECK(sol.j_star == doctest::Approx(sol.v_star[0]).epsilon(1e-14));
}

TEST_CASE("large temperature drives the optimal policy to uniform") {
    TabularMdp mdp = make_synthetic(3, 2, 0.9, 2);
    SoftSolution sol = optimal_reg_values(mdp, 100.0);
    for (std::size_t i = 0; i < sol.pi_star.probs.size(); ++i)
        CHECK(sol.pi_star.probs.data()[i] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("policy evaluation at the soft optimum reproduces the optimal value") {
    TabularMdp mdp = make_synthetic(3, 2, 0.9, 6);
    const double tol = 1e-11;
    SoftSolution sol = optimal_reg_values(mdp, 0.1, tol);
    RegValues vals = reg_values(mdp, sol.pi_star, 0.1);
    for (std::size_t s = 0; s < 3; ++s)
        CHECK(std::abs(vals.v[s] - sol.v_star[s]) <= 10.0 * tol);
}

TEST_CASE("gradient vanishes at the soft optimum") {
    TabularMdp mdp = make_synthetic(3, 2, 0.9, 3);
    SoftSolution sol = optimal_reg_values(mdp, 0.1, 1e-12);
    Matrix grad = exact_gradient(mdp, logits_from_policy(sol.pi_star), 0.1);
    CHECK(sup_norm(grad) <= 1e-6);
}

TEST_CASE("gradient of a single-action problem is zero") {
    TabularMdp mdp = one_state_one_action(1.0, 0.9);
    Matrix grad = exact_gradient(mdp, Logits::zeros(1, 1), 0.3);
    CHECK(sup_norm(grad) <= 1e-12);
}

TEST_CASE("pl coefficient of the uniform two-by-two case") {
    TabularMdp mdp;
    mdp.n_states = 2;
    mdp.n_actions = 2;
    mdp.gamma = 0.5;
    mdp.transition = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
    mdp.reward = Matrix(2, 2, 0.5);
    mdp.init_dist = {0.5, 0.5};
    CHECK(pl_coefficient(mdp, Logits::zeros(2, 2), 1.0) ==
          doctest::Approx(0.015625).epsilon(1e-14));
}

TEST_CASE("pl coefficient decreases as the policy sharpens") {
    TabularMdp mdp = make_synthetic(2, 2, 0.9, 4);
    double previous = std::numeric_limits<double>::infinity();
    for (double scale : {0.0, 1.0, 2.0, 4.0}) {
        Logits theta = Logits::zeros(2, 2);
        theta.theta(0, 0) = scale;
        theta.theta(1, 0) = scale;
        const double mu = pl_coefficient(mdp, theta, 0.1);
        CHECK(mu <= previous + 1e-15);
        previous = mu;
    }
}

TEST_CASE("pl floor matches the coefficient at the threshold") {
    TabularMdp mdp = make_synthetic(2, 2, 0.5, 4);
    Tau tau = tau_lambda(mdp, 2.0);
    REQUIRE(tau.enabled());
    ConstantsReport rep = constants_report(mdp, 2.0, tau, 0.1, 0.01, Matrix());
    // A policy whose min prob is exactly tau has this PL coefficient.
    const double expected = 2.0 * 0.5 * 0.25 * tau.tau * tau.tau / 2.0;
    CHECK(rep.pl_floor_mu == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("pl coefficient requires exploration of every state") {
    TabularMdp mdp = make_gridworld(2, 2, 0.9, GridInit::StartCell);
    CHECK_THROWS_AS(pl_coefficient(mdp, Logits::zeros(4, 4), 0.1), std::invalid_argument);
}

TEST_CASE("smoothness constant formula") {
    CHECK(smoothness_L(0.0, 0.0, 4) == doctest::Approx(8.0).epsilon(1e-15));
    const double oracle = (8.0 + 0.05 * (4.0 + 8.0 * std::log(4.0))) / (0.01 * 0.01 * 0.01);
    CHECK(smoothness_L(0.05, 0.99, 4) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(smoothness_L(0.05, 0.99, 4) == doctest::Approx(8.7545e6).epsilon(1e-4));
    CHECK(smoothness_L(0.1, 0.9, 4) > smoothness_L(0.05, 0.9, 4));
    CHECK(smoothness_L(0.05, 0.95, 4) > smoothness_L(0.05, 0.9, 4));
}

TEST_CASE("soft performance difference is zero for identical policies") {
    TabularMdp mdp = make_synthetic(3, 2, 0.9, 3);
    Policy pi = Policy::uniform(3, 2);
    auto [lhs, rhs] = soft_pdl_sides(mdp, pi, pi, 0.1, 0);
    CHECK(std::abs(lhs) <= 1e-12);
    CHECK(std::abs(rhs) <= 1e-12);
}

TEST_CASE("soft performance difference identity on random pairs") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        TabularMdp mdp = make_synthetic(3, 2, uniform_range(rng, 0.5, 0.95), rng());
        Policy pi1 = softmax_policy(random_logits(3, 2, 3.0, rng));
        Policy pi2 = softmax_policy(random_logits(3, 2, 3.0, rng));
        const double lambda = uniform_range(rng, 0.01, 1.0);
        const std::size_t s = uniform_index(rng, 3);
        auto [lhs, rhs] = soft_pdl_sides(mdp, pi1, pi2, lambda, s);
        CHECK(std::abs(lhs - rhs) <= 1e-8);
        auto [lhs_swapped, rhs_swapped] = soft_pdl_sides(mdp, pi2, pi1, lambda, s);
        CHECK(lhs_swapped == doctest::Approx(-lhs).epsilon(1e-10));
        CHECK(std::abs(lhs_swapped - rhs_swapped) <= 1e-8);
    }
}

TEST_CASE("critic noise constant at zero temperature and discount") {
    TabularMdp mdp = one_state_one_action(0.5, 0.9);
    mdp.gamma = 0.0;  // formula probe; the trainer never sees this object
    ConstantsReport rep = constants_report(mdp, 0.0, Tau::from_value(0.01), 0.1, 0.01, Matrix());
    CHECK(rep.critic_sigma_sq == doctest::Approx(36.0).epsilon(1e-15));
}

TEST_CASE("critic contraction constant follows the formula") {
    TabularMdp mdp = make_synthetic(2, 2, 0.5, 9);
    Tau tau = tau_lambda(mdp, 2.0);
    REQUIRE(tau.enabled());
    ConstantsReport rep = constants_report(mdp, 2.0, tau, 0.1, 0.01, Matrix());
    CHECK(rep.critic_mu == doctest::Approx(0.25 * 0.5 * tau.tau / 2.0).epsilon(1e-12));
    CHECK(rep.tau_positive);
    CHECK(std::isfinite(rep.bias_B));
    CHECK(std::isfinite(rep.c_tilde_lambda));
    CHECK(rep.c_tilde_lambda == doctest::Approx(2.0 * rep.c_lambda).epsilon(1e-12));
    CHECK(rep.predicted_H_floor > 0.0);
}

TEST_CASE("tau-dependent constants are flagged when the projection is disabled") {
    TabularMdp mdp = make_synthetic(2, 2, 0.99, 9);
    ConstantsReport rep = constants_report(mdp, 0.05, Tau::disabled(), 0.1, 0.01, Matrix());
    CHECK(!rep.tau_positive);
    CHECK(std::isinf(rep.c_lambda));
    CHECK(std::isinf(rep.bias_B));
    CHECK(rep.pl_floor_mu == 0.0);
    CHECK(std::isfinite(rep.smoothness_L));
    CHECK(std::isfinite(rep.critic_sigma_sq));
}

TEST_CASE("pl inequality holds over random logits") {
    Rng rng(11);
    TabularMdp mdp = make_synthetic(3, 2, 0.9, 11);
    SoftSolution sol = optimal_reg_values(mdp, 0.1);
    for (int trial = 0; trial < 100; ++trial) {
        Logits theta = random_logits(3, 2, 3.0, rng);
        Matrix grad = exact_gradient(mdp, theta, 0.1);
        const double gap = sol.j_star - reg_objective(mdp, softmax_policy(theta), 0.1);
        CHECK(gap >= -1e-9);
        CHECK(l2_norm_sq(grad) >= pl_coefficient(mdp, theta, 0.1) * gap - 1e-9);
    }
}

}  // TEST_SUITE
