#include "entac/mdp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "entac/rng.hpp"
#include "json.hpp"

namespace entac {

namespace {

std::string fmt_index(std::size_t s, std::size_t a) {
    std::ostringstream os;
    os << "(" << s << "," << a << ")";
    return os.str();
}

}  // namespace

std::vector<std::string> validate(const TabularMdp& mdp) {
    std::vector<std::string> violations;
    const std::size_t S = mdp.n_states, A = mdp.n_actions;

    if (S == 0 || A == 0) {
        violations.push_back("empty state or action space");
        return violations;
    }
    if (mdp.transition.size() != S * A * S || mdp.reward.rows() != S || mdp.reward.cols() != A ||
        mdp.init_dist.size() != S) {
        violations.push_back("inconsistent array shapes");
        return violations;
    }
    if (!(mdp.gamma > 0.0 && mdp.gamma < 1.0)) {
        std::ostringstream os;
        os << "gamma " << mdp.gamma << " outside (0,1)";
        violations.push_back(os.str());
    }

    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
            KahanSum row;
            for (std::size_t s2 = 0; s2 < S; ++s2) {
                double p = mdp.p(s, a, s2);
                if (p < 0.0) {
                    std::ostringstream os;
                    os << "negative transition probability at " << fmt_index(s, a) << "->" << s2
                       << " (" << p << ")";
                    violations.push_back(os.str());
                }
                row.add(p);
            }
            double err = std::abs(row.value() - 1.0);
            if (err > 1e-12) {
                std::ostringstream os;
                os << "transition row " << fmt_index(s, a) << " sums to " << row.value()
                   << " (|sum-1|=" << err << ")";
                violations.push_back(os.str());
            }
            double r = mdp.reward(s, a);
            if (!(r >= 0.0 && r <= 1.0)) {
                std::ostringstream os;
                os << "reward out of [0,1] at " << fmt_index(s, a) << " (" << r << ")";
                violations.push_back(os.str());
            }
        }
    }

    KahanSum rho;
    for (std::size_t s = 0; s < S; ++s) {
        if (mdp.init_dist[s] < 0.0) {
            std::ostringstream os;
            os << "negative initial probability at state " << s << " (" << mdp.init_dist[s] << ")";
            violations.push_back(os.str());
        }
        rho.add(mdp.init_dist[s]);
    }
    double err = std::abs(rho.value() - 1.0);
    if (err > 1e-12) {
        std::ostringstream os;
        os << "init_dist sums to " << rho.value() << " (|sum-1|=" << err << ")";
        violations.push_back(os.str());
    }
    return violations;
}

TabularMdp make_gridworld(std::size_t rows, std::size_t cols, double gamma, GridInit init) {
    if (rows * cols < 2) throw std::invalid_argument("make_gridworld: needs at least 2 cells");

    const std::size_t S = rows * cols, A = 4;
    TabularMdp mdp;
    mdp.n_states = S;
    mdp.n_actions = A;
    mdp.gamma = gamma;
    mdp.transition.assign(S * A * S, 0.0);
    mdp.reward = Matrix::zeros(S, A);
    mdp.init_dist.assign(S, 0.0);

    // Cell (r, c) with r the row from the bottom; bottom-left is the start,
    // top-right the goal.
    auto cell = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
    const std::size_t goal = cell(rows - 1, cols - 1);

    const int dr[4] = {1, 0, -1, 0};  // up, right, down, left
    const int dc[4] = {0, 1, 0, -1};

    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t s = cell(r, c);
            for (std::size_t a = 0; a < A; ++a) {
                std::size_t next = s;
                if (s != goal) {  // goal is absorbing
                    long nr = static_cast<long>(r) + dr[a];
                    long nc = static_cast<long>(c) + dc[a];
                    if (nr >= 0 && nr < static_cast<long>(rows) && nc >= 0 &&
                        nc < static_cast<long>(cols))
                        next = cell(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc));
                }
                mdp.p(s, a, next) = 1.0;
                if (s != goal && next == goal) mdp.reward(s, a) = 1.0;
            }
        }
    }

    if (init == GridInit::StartCell)
        mdp.init_dist[cell(0, 0)] = 1.0;
    else
        mdp.init_dist.assign(S, 1.0 / static_cast<double>(S));
    return mdp;
}

TabularMdp make_synthetic(std::size_t n_states, std::size_t n_actions, double gamma,
                          std::uint64_t seed) {
    if (n_states == 0 || n_actions == 0)
        throw std::invalid_argument("make_synthetic: empty state or action space");

    TabularMdp mdp;
    mdp.n_states = n_states;
    mdp.n_actions = n_actions;
    mdp.gamma = gamma;
    mdp.transition.assign(n_states * n_actions * n_states, 0.0);
    mdp.reward = Matrix::zeros(n_states, n_actions);
    mdp.init_dist.assign(n_states, 1.0 / static_cast<double>(n_states));

    Rng rng(seed);
    // Draw order is part of the determinism contract: all transition rows
    // first (s-major, a-minor), then all rewards row-major.
    for (std::size_t s = 0; s < n_states; ++s) {
        for (std::size_t a = 0; a < n_actions; ++a) {
            double total = 0.0;
            for (std::size_t s2 = 0; s2 < n_states; ++s2) {
                double e = exponential1(rng);
                mdp.p(s, a, s2) = e;
                total += e;
            }
            if (total == 0.0) {  // unreachable in practice; keep the row stochastic
                for (std::size_t s2 = 0; s2 < n_states; ++s2)
                    mdp.p(s, a, s2) = 1.0 / static_cast<double>(n_states);
            } else {
                for (std::size_t s2 = 0; s2 < n_states; ++s2) mdp.p(s, a, s2) /= total;
            }
        }
    }
    for (std::size_t s = 0; s < n_states; ++s)
        for (std::size_t a = 0; a < n_actions; ++a) mdp.reward(s, a) = uniform01(rng);
    return mdp;
}

Occupancy occupancy_from(const TabularMdp& mdp, const Policy& policy, const Vector& rho) {
    const std::size_t S = mdp.n_states, A = mdp.n_actions;
    if (policy.n_states() != S || policy.n_actions() != A)
        throw std::invalid_argument("occupancy: policy shape mismatch");

    // (I - gamma P_pi^T) d = (1-gamma) rho, with P_pi(s'|s) = sum_a P pi.
    Matrix lhs(S, S, 0.0);
    for (std::size_t s2 = 0; s2 < S; ++s2) lhs(s2, s2) = 1.0;
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a) {
            const double w = mdp.gamma * policy.probs(s, a);
            if (w == 0.0) continue;
            for (std::size_t s2 = 0; s2 < S; ++s2) lhs(s2, s) -= w * mdp.p(s, a, s2);
        }

    Vector rhs(S);
    for (std::size_t s = 0; s < S; ++s) rhs[s] = (1.0 - mdp.gamma) * rho[s];

    Matrix lhs_copy = lhs;
    Vector d = solve_dense(std::move(lhs), rhs);
    double res = solve_residual(lhs_copy, d, rhs);
    if (res > 1e-8) throw std::runtime_error("occupancy: linear solve residual above 1e-8");
    return Occupancy{std::move(d)};
}

Occupancy occupancy(const TabularMdp& mdp, const Policy& policy) {
    return occupancy_from(mdp, policy, mdp.init_dist);
}

std::pair<double, double> occupancy_distance_bound(const TabularMdp& mdp, const Policy& pi1,
                                                   const Policy& pi2) {
    Occupancy d1 = occupancy(mdp, pi1);
    Occupancy d2 = occupancy(mdp, pi2);
    KahanSum lhs;
    for (std::size_t s = 0; s < mdp.n_states; ++s) lhs.add(std::abs(d1.d[s] - d2.d[s]));

    double max_row = 0.0;
    for (std::size_t s = 0; s < mdp.n_states; ++s) {
        KahanSum row;
        for (std::size_t a = 0; a < mdp.n_actions; ++a)
            row.add(std::abs(pi1.probs(s, a) - pi2.probs(s, a)));
        max_row = std::max(max_row, row.value());
    }
    double rhs = mdp.gamma / (1.0 - mdp.gamma) * max_row;
    return {lhs.value(), rhs};
}

std::string mdp_to_json(const TabularMdp& mdp) {
    nlohmann::json doc;
    doc["n_states"] = mdp.n_states;
    doc["n_actions"] = mdp.n_actions;
    doc["gamma"] = mdp.gamma;
    doc["transition"] = mdp.transition;
    doc["reward"] = mdp.reward.storage();
    doc["init_dist"] = mdp.init_dist;
    return doc.dump();
}

TabularMdp mdp_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    TabularMdp mdp;
    mdp.n_states = doc.at("n_states").get<std::size_t>();
    mdp.n_actions = doc.at("n_actions").get<std::size_t>();
    mdp.gamma = doc.at("gamma").get<double>();
    mdp.transition = doc.at("transition").get<std::vector<double>>();
    auto reward_flat = doc.at("reward").get<std::vector<double>>();
    mdp.init_dist = doc.at("init_dist").get<std::vector<double>>();

    if (mdp.transition.size() != mdp.n_states * mdp.n_actions * mdp.n_states ||
        reward_flat.size() != mdp.n_states * mdp.n_actions ||
        mdp.init_dist.size() != mdp.n_states)
        throw std::invalid_argument("mdp_from_json: array sizes do not match n_states/n_actions");

    mdp.reward = Matrix(mdp.n_states, mdp.n_actions);
    for (std::size_t i = 0; i < reward_flat.size(); ++i) mdp.reward.data()[i] = reward_flat[i];
    return mdp;
}

}  // namespace entac
