#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "entac/linalg.hpp"
#include "entac/policy.hpp"

namespace entac {

/// Finite discounted MDP. Immutable after construction; all operations on
/// it are pure.
struct TabularMdp {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    std::vector<double> transition;  // (s, a, s') row-major, size S*A*S
    Matrix reward;                   // (s, a), entries in [0, 1]
    Vector init_dist;                // over states, sums to 1
    double gamma = 0.0;

    double p(std::size_t s, std::size_t a, std::size_t s2) const {
        return transition[(s * n_actions + a) * n_states + s2];
    }
    double& p(std::size_t s, std::size_t a, std::size_t s2) {
        return transition[(s * n_actions + a) * n_states + s2];
    }

    double rho_min() const {
        double m = 1.0;
        for (double x : init_dist) m = std::min(m, x);
        return m;
    }
};

/// Discounted state-visitation distribution of a policy.
struct Occupancy {
    Vector d;
};

enum class GridInit { StartCell, Uniform };

/// Returns one human-readable violation per broken invariant; empty means
/// the MDP is well formed.
std::vector<std::string> validate(const TabularMdp& mdp);

/// Deterministic gridworld: 4 cardinal actions, boundary moves keep the
/// agent in place, reward 1 on the transition from a non-goal cell into
/// the top-right goal, which is absorbing with reward 0.
TabularMdp make_gridworld(std::size_t rows, std::size_t cols, double gamma, GridInit init);

/// Dense random MDP: transition rows uniform on the simplex (normalized
/// i.i.d. exponentials), rewards i.i.d. Unif[0,1], uniform initial
/// distribution. Pure function of its arguments.
TabularMdp make_synthetic(std::size_t n_states, std::size_t n_actions, double gamma,
                          std::uint64_t seed);

/// Solves (I - gamma P_pi^T) d = (1 - gamma) rho directly.
Occupancy occupancy(const TabularMdp& mdp, const Policy& policy);
Occupancy occupancy_from(const TabularMdp& mdp, const Policy& policy, const Vector& rho);

/// (lhs, rhs) of ||d^{pi1} - d^{pi2}||_1 <= gamma/(1-gamma) * max_s
/// ||pi1(.|s) - pi2(.|s)||_1.
std::pair<double, double> occupancy_distance_bound(const TabularMdp& mdp, const Policy& pi1,
                                                   const Policy& pi2);

/// JSON document {n_states, n_actions, gamma, transition, reward,
/// init_dist}; round-trips are bit-exact for finite doubles.
std::string mdp_to_json(const TabularMdp& mdp);
TabularMdp mdp_from_json(const std::string& text);

}  // namespace entac
