"""Smoke tests for the _entac extension module."""

import math
import sys

import numpy as np

try:
    import entac as m
except ImportError:
    import _entac as m


def test_gridworld_shape():
    mdp = m.make_gridworld(2, 2, 0.99, init="uniform")
    assert mdp.n_states == 4
    assert mdp.n_actions == 4
    assert m.validate(mdp) == []
    assert np.allclose(mdp.init_dist, 0.25)
    assert mdp.transition.shape == (4, 4, 4)


def test_mdp_json_roundtrip():
    mdp = m.make_synthetic(3, 2, 0.9, 5)
    back = m.TabularMdp.from_json(mdp.to_json())
    assert np.array_equal(back.transition, mdp.transition)
    assert np.array_equal(back.reward, mdp.reward)


def test_occupancy_normalizes():
    mdp = m.make_synthetic(4, 3, 0.9, 0)
    probs, _ = m.softmax_policy(np.zeros((4, 3)))
    d = m.occupancy(mdp, probs)
    assert abs(d.sum() - 1.0) < 1e-10
    assert (d >= 0).all()


def test_gradient_matches_finite_differences():
    mdp = m.make_synthetic(4, 3, 0.9, 1)
    rng = np.random.default_rng(0)
    theta = rng.uniform(-2, 2, size=(4, 3))
    exact = m.exact_gradient(mdp, theta, 0.1)
    fd = m.finite_diff_gradient(mdp, theta, 0.1, h=1e-5)
    scale = max(np.abs(exact).max(), 1e-12)
    assert np.abs(fd - exact).max() / scale < 1e-5


def test_solve_consistency():
    mdp = m.make_synthetic(3, 2, 0.9, 7)
    sol = m.optimal_reg_values(mdp, 0.1)
    assert sol["residual"] < 1e-10
    vals = m.reg_values(mdp, sol["pi_star"], 0.1)
    assert np.abs(vals["v"] - sol["v_star"]).max() < 1e-9
    obj = m.reg_objective(mdp, sol["pi_star"], 0.1)
    assert obj <= sol["j_star"] + 1e-9


def test_projection_floor():
    probs = np.array([[0.004, 0.006, 0.99]])
    out = m.project_policy(probs, 0.01)
    assert np.allclose(out, [[0.01, 0.01, 0.98]])
    assert abs(out.sum() - 1.0) < 1e-12


def test_tau_lambda_regimes():
    rep = m.tau_lambda(m.make_synthetic(2, 2, 0.5, 0), 2.0)
    assert rep["enabled"] and rep["tau"] > 0
    rep = m.tau_lambda(m.make_gridworld(2, 2, 0.99, init="start-cell"), 0.05)
    assert not rep["enabled"]


def test_run_ent_ac_deterministic():
    mdp = m.make_gridworld(2, 2, 0.99, init="uniform")
    config = {"eta_a": 0.1, "eta_c": 0.05, "H": 8, "K": 200, "lambda": 0.05, "seed": 3}
    a = m.run_ent_ac(mdp, config)
    b = m.run_ent_ac(mdp, config)
    assert a["csv"] == b["csv"]
    assert not a["aborted"]
    assert a["objective"][-1] <= a["j_star"] + 1e-8


def test_exact_oracle_has_zero_critic_error():
    mdp = m.make_gridworld(2, 2, 0.99, init="uniform")
    config = {
        "eta_a": 0.1,
        "eta_c": 0.05,
        "H": 1,
        "K": 100,
        "lambda": 0.05,
        "seed": 0,
        "critic_mode": "exact-oracle",
    }
    trace = m.run_ent_ac(mdp, config)
    assert max(trace["critic_mse"]) <= 1e-20


def test_check_suite_aux_passes():
    for result in m.check_suite("aux", 0):
        assert result["passed"], result


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
